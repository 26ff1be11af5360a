#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermigas/numerics.hpp"

namespace fermigas {

enum class PotentialKind {
  HarmonicPlusOne,      // offset + |x|^2
  PowerPlusOne,         // offset + |x|^s, s > 1
  CustomRadial,         // monotone-interpolated table with power-law growth tail
  AnisotropicHarmonic,  // offset + sum_i (w_i x_i)^2
};

struct PotentialSpec {
  PotentialKind kind = PotentialKind::HarmonicPlusOne;
  double offset = 1.0;
  double exponent = 2.0;
  Vec3 frequencies{1.0, 1.0, 1.0};
  std::vector<double> table_radii;
  std::vector<double> table_values;
  // Declared growth of a custom table beyond its last node; 0 means a flat tail.
  double growth_exponent = 2.0;
};

std::string kind_name(PotentialKind kind);

// Values, Laplacian, |grad Laplacian| and squared Frobenius norm of the Hessian at a point.
struct DerivativeSample {
  double value = 0.0;
  double laplacian = 0.0;
  double grad_laplacian_norm = 0.0;
  double hessian_frobenius_sq = 0.0;
};

class Potential {
 public:
  explicit Potential(PotentialSpec spec);

  double operator()(const Vec3& x) const;
  // Requires is_radial().
  double radial_value(double r) const;

  bool is_radial() const { return spec_.kind != PotentialKind::AnisotropicHarmonic; }
  bool has_derivatives() const { return spec_.kind != PotentialKind::CustomRadial; }
  bool confining() const;
  double minimum() const { return minimum_; }
  double growth_exponent() const;
  const PotentialSpec& spec() const { return spec_; }

  // Largest radius with V(r) <= level; 0 when the sublevel set is empty.
  double sublevel_radius(double level) const;
  // Half widths of an axis-aligned box containing {V <= level}.
  Vec3 sublevel_half_widths(double level) const;

  double gradient_norm(const Vec3& x) const;
  DerivativeSample derivatives(const Vec3& x) const;

 private:
  PotentialSpec spec_;
  std::optional<RadialProfile> table_;
  double minimum_ = 0.0;
};

Potential make_potential(const PotentialSpec& spec);

struct H1Report {
  double radius = 0.0;
  int directions = 0;
  std::size_t points = 0;
  double laplacian_constant = 0.0;       // |Laplacian V| <= C1 V^2
  double grad_laplacian_constant = 0.0;  // |grad Laplacian V| <= C2 V
  double hessian_constant = 0.0;         // sum_jk |d_jk V|^2 <= C3 V^2
  double min_value = 0.0;
  bool pass = false;
  bool normalized = false;  // V >= 1 on every sampled point
};

// Sampled constants on shells r = k/32 (k = 0, 1, ...) up to `radius`, each carrying the
// same Halton set of `directions` unit vectors, so samples nest as the radius grows.
H1Report h1_diagnostic(const Potential& v, double radius, int directions);

// Integral of h(V(x)) over {V(x) < level}; h should vanish continuously at level.
double sublevel_integral(const Potential& v, double level, const ScalarFunction& h, const Tolerance& tol);

}  // namespace fermigas
