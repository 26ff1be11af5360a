#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermigas/numerics.hpp"

namespace fermigas {

enum class InteractionKind {
  Zero,
  SquareBarrier,  // amplitude on r <= radius
  HardCore,       // infinite wall on r < radius
  Bump,           // amplitude (1 - (r/radius)^2)^2 on r <= radius
  Tabulated,      // monotone-interpolated samples on [0, last radius]
};

struct InteractionSpec {
  InteractionKind kind = InteractionKind::SquareBarrier;
  double amplitude = 1.0;
  double radius = 1.0;
  std::vector<double> table_radii;
  std::vector<double> table_values;
};

std::string kind_name(InteractionKind kind);

// v(r) = factor * base(r / dilation); dilation shrinks or stretches the range.
class Interaction {
 public:
  explicit Interaction(InteractionSpec spec);

  double operator()(double r) const;
  double range() const;
  bool is_zero() const;
  bool is_hard_core() const { return spec_.kind == InteractionKind::HardCore; }
  // Radii where v jumps (integration breakpoints).
  std::vector<double> discontinuities() const;
  const InteractionSpec& spec() const { return spec_; }
  double factor() const { return factor_; }
  double dilation() const { return dilation_; }

  // factor * v(r / dilation) on top of the current scaling.
  Interaction scaled(double factor, double dilation) const;

 private:
  InteractionSpec spec_;
  double factor_ = 1.0;
  double dilation_ = 1.0;
  std::optional<RadialProfile> table_;
  double base_range_ = 0.0;
};

struct ScatteringSolution {
  double scattering_length = 0.0;
  double range = 0.0;
  double fit_residual = 0.0;     // max |u - (r - a)| beyond the range
  double scattering_energy = 0.0;  // int |grad f|^2 + v f^2 / 2 over R^3
  double richardson_change = 0.0;  // |a(n) - a(n/2)| at the accepted step count
  int steps = 0;                  // per interior segment
  RadialProfile u;                // u(r) = r f(r), normalized so u = r - a outside the range
};

// Outward shooting for u'' = v u / 2 with u(0) = 0, u'(0) = 1 (or u(R_core) = 0 for a hard core).
ScatteringSolution zero_energy_solve(const Interaction& v, double r_max, const Tolerance& tol = {});

struct AmplitudePoint {
  double amplitude = 0.0;
  double scattering_length = 0.0;
};

// Scattering length of A v for each amplitude A.
std::vector<AmplitudePoint> hardcore_limit(const Interaction& v, const std::vector<double>& amplitudes,
                                           const Tolerance& tol = {});

struct ScaledIdentity {
  double lhs = 0.0;  // a of hbar^-2 N^(2 beta - 2/3) w(N^beta .), hbar = N^(-1/3)
  double rhs = 0.0;  // N^-beta a_w
  double rel_err = 0.0;
};

ScaledIdentity scaled_identity_check(const Interaction& w, double n, double beta, const Tolerance& tol = {});

struct LargeAmplitudePoint {
  double n = 0.0;
  double scaled_length = 0.0;  // N^beta a(hbar^-2 N^alpha w(N^beta .))
};

// Requires alpha > 2 beta - 2/3; the scaled length should approach the range of w.
std::vector<LargeAmplitudePoint> large_amplitude_trend(const Interaction& w, double alpha, double beta,
                                            const std::vector<double>& ns, const Tolerance& tol = {});

class DysonKit {
 public:
  DysonKit(double inner_radius, double outer_radius, double inverse_momentum, double fermi_momentum);

  double inner_radius() const { return r0_; }
  double outer_radius() const { return r_; }
  double inverse_momentum() const { return s_; }
  double fermi_momentum() const { return pf_; }
  // Quadrature value of int U_R, recorded at construction.
  double u_integral() const { return u_integral_; }

  double spread(double r) const;  // U_R
  double cutoff(double p) const;  // chi_s
  double gamma(double p) const;   // Gamma

 private:
  double r0_;
  double r_;
  double s_;
  double pf_;
  double u_integral_ = 0.0;
};

DysonKit dyson_parts(double inner_radius, double outer_radius, double inverse_momentum, double fermi_momentum);

struct DysonCheck {
  int momenta = 0;
  int violations = 0;
  double min_margin = 0.0;  // min over the grid of Gamma - (1 - s^2 p_F^2) chi^2
};

// Uniform momentum grid on [0, p_max] with `count` points.
DysonCheck dyson_inequality_check(const DysonKit& kit, int count, double p_max);

}  // namespace fermigas
