#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fermigas/error.hpp"

namespace fermigas {

using Vec3 = std::array<double, 3>;
using ScalarFunction = std::function<double(double)>;
using Field = std::function<double(const Vec3&)>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  int max_refinements = 4000;

  // Throws ConfigError when the tolerance is unusable.
  void validate() const;
  double target(double estimate) const;
};

enum class TailKind { Zero, Power };

// Extrapolation beyond the last node: zero, or coefficient * r^exponent.
struct Tail {
  TailKind kind = TailKind::Zero;
  double coefficient = 0.0;
  double exponent = 0.0;

  double operator()(double r) const;
  bool operator==(const Tail&) const = default;
};

// Radial samples with monotone cubic (Fritsch-Carlson) interpolation.
class RadialProfile {
 public:
  static constexpr std::size_t kMinNodes = 16;

  RadialProfile(std::vector<double> nodes, std::vector<double> values, Tail tail = {});

  double operator()(double r) const;
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }
  const Tail& tail() const { return tail_; }
  std::size_t size() const { return nodes_.size(); }
  double last_node() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Tail tail_;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Breakpoints inside
// (a, b) become initial interval boundaries.
QuadratureResult integrate(const ScalarFunction& f, double a, double b, const Tolerance& tol,
                           std::span<const double> breakpoints = {});

// Integral of f(r) 4 pi r^2 over [0, r_max].
double integrate_radial(const ScalarFunction& f, double r_max, const Tolerance& tol,
                        std::span<const double> breakpoints = {});

// Iterated adaptive cubature over the box [lo, hi]. Sign changes of `kink` along each
// innermost line are located and used as breakpoints.
double integrate_box(const Field& f, const Vec3& lo, const Vec3& hi, const Tolerance& tol,
                     const Field& kink = {});

// Roots of g on [a, b] detected by a uniform sign scan and refined by bisection.
std::vector<double> sign_changes(const ScalarFunction& g, double a, double b, int samples);

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
  bool monotonicity_warning = false;
};

// Safeguarded secant (Illinois) iteration with bisection fallback.
RootResult find_root_monotone(const ScalarFunction& g, double lo, double hi, const Tolerance& tol);

// (int |f - g|^p 4 pi r^2 dr)^(1/p) on the union of both node ranges.
double lp_distance(const RadialProfile& f, const RadialProfile& g, double p,
                   const Tolerance& tol = {});

// Same on a box for fields.
double lp_distance(const Field& f, const Field& g, double p, const Vec3& lo, const Vec3& hi,
                   const Tolerance& tol = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

// Least-squares slope of log(y) against log(x).
double fit_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fermigas
