#include "fermigas/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fermigas {

namespace {

constexpr double kShellSpacing = 1.0 / 32.0;

double radical_inverse(unsigned index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

double bounded_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

double norm(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

}  // namespace

std::string kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::HarmonicPlusOne: return "harmonic_plus_one";
    case PotentialKind::PowerPlusOne: return "power_plus_one";
    case PotentialKind::CustomRadial: return "custom_radial";
    case PotentialKind::AnisotropicHarmonic: return "anisotropic_harmonic";
  }
  return "unknown";
}

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) {
  if (!std::isfinite(spec_.offset) || spec_.offset < 0.0) throw ConfigError("potential offset must be finite and >= 0");
  switch (spec_.kind) {
    case PotentialKind::HarmonicPlusOne:
      minimum_ = spec_.offset;
      break;
    case PotentialKind::PowerPlusOne:
      if (!std::isfinite(spec_.exponent) || !(spec_.exponent > 1.0))
        throw ConfigError("power_plus_one requires exponent s > 1");
      minimum_ = spec_.offset;
      break;
    case PotentialKind::AnisotropicHarmonic:
      for (double w : spec_.frequencies)
        if (!std::isfinite(w) || !(w > 0.0)) throw ConfigError("anisotropic_harmonic frequencies must be > 0");
      minimum_ = spec_.offset;
      break;
    case PotentialKind::CustomRadial: {
      if (spec_.table_radii.empty() || spec_.table_radii.front() != 0.0)
        throw ConfigError("custom_radial table must start at r = 0");
      if (!std::isfinite(spec_.growth_exponent) || spec_.growth_exponent < 0.0)
        throw ConfigError("custom_radial growth exponent must be >= 0");
      for (double v : spec_.table_values)
        if (!(v >= 1.0)) throw ConfigError("custom_radial table values must be >= 1");
      const double r_last = spec_.table_radii.back();
      const double v_last = spec_.table_values.empty() ? 1.0 : spec_.table_values.back();
      Tail tail{TailKind::Power, v_last / std::pow(r_last, spec_.growth_exponent), spec_.growth_exponent};
      table_.emplace(spec_.table_radii, spec_.table_values, tail);
      minimum_ = *std::min_element(spec_.table_values.begin(), spec_.table_values.end());
      break;
    }
  }
}

Potential make_potential(const PotentialSpec& spec) { return Potential(spec); }

bool Potential::confining() const {
  return spec_.kind != PotentialKind::CustomRadial || spec_.growth_exponent > 0.0;
}

double Potential::growth_exponent() const {
  switch (spec_.kind) {
    case PotentialKind::PowerPlusOne: return spec_.exponent;
    case PotentialKind::CustomRadial: return spec_.growth_exponent;
    default: return 2.0;
  }
}

double Potential::radial_value(double r) const {
  switch (spec_.kind) {
    case PotentialKind::HarmonicPlusOne: return spec_.offset + r * r;
    case PotentialKind::PowerPlusOne: return spec_.offset + std::pow(r, spec_.exponent);
    case PotentialKind::CustomRadial: return (*table_)(r);
    case PotentialKind::AnisotropicHarmonic: break;
  }
  throw UnsupportedError("radial evaluation requested for a non-radial potential");
}

double Potential::operator()(const Vec3& x) const {
  if (spec_.kind == PotentialKind::AnisotropicHarmonic) {
    double sum = spec_.offset;
    for (int i = 0; i < 3; ++i) {
      const double y = spec_.frequencies[i] * x[i];
      sum += y * y;
    }
    return sum;
  }
  if (spec_.kind == PotentialKind::HarmonicPlusOne) return spec_.offset + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return radial_value(norm(x));
}

double Potential::sublevel_radius(double level) const {
  if (!(level > minimum_)) return 0.0;
  switch (spec_.kind) {
    case PotentialKind::HarmonicPlusOne: return std::sqrt(level - spec_.offset);
    case PotentialKind::PowerPlusOne: return std::pow(level - spec_.offset, 1.0 / spec_.exponent);
    case PotentialKind::AnisotropicHarmonic: {
      const double w_min = *std::min_element(spec_.frequencies.begin(), spec_.frequencies.end());
      return std::sqrt(level - spec_.offset) / w_min;
    }
    case PotentialKind::CustomRadial: break;
  }
  const auto& r = spec_.table_radii;
  const auto& v = spec_.table_values;
  if (level >= v.back()) {
    if (spec_.growth_exponent == 0.0)
      throw DomainError("sublevel set is unbounded: custom potential with flat tail is not confining (divergent integral)");
    return r.back() * std::pow(level / v.back(), 1.0 / spec_.growth_exponent);
  }
  std::size_t i = v.size() - 1;
  while (i > 0 && v[i] > level) --i;
  if (v[i] > level) return 0.0;
  // The interpolant is monotone on each interval, so the crossing is unique.
  double lo = r[i];
  double hi = r[i + 1];
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((*table_)(mid) <= level ? lo : hi) = mid;
  }
  return lo;
}

Vec3 Potential::sublevel_half_widths(double level) const {
  if (spec_.kind == PotentialKind::AnisotropicHarmonic) {
    const double reach = std::sqrt(std::max(level - spec_.offset, 0.0));
    return {reach / spec_.frequencies[0], reach / spec_.frequencies[1], reach / spec_.frequencies[2]};
  }
  const double r = sublevel_radius(level);
  return {r, r, r};
}

double Potential::gradient_norm(const Vec3& x) const {
  switch (spec_.kind) {
    case PotentialKind::HarmonicPlusOne: return 2.0 * norm(x);
    case PotentialKind::PowerPlusOne: {
      const double s = spec_.exponent;
      return s * std::pow(norm(x), s - 1.0);
    }
    case PotentialKind::AnisotropicHarmonic: {
      Vec3 g;
      for (int i = 0; i < 3; ++i) g[i] = 2.0 * spec_.frequencies[i] * spec_.frequencies[i] * x[i];
      return norm(g);
    }
    case PotentialKind::CustomRadial: break;
  }
  throw UnsupportedError("gradient unavailable for tabulated potentials");
}

DerivativeSample Potential::derivatives(const Vec3& x) const {
  DerivativeSample d;
  d.value = (*this)(x);
  switch (spec_.kind) {
    case PotentialKind::HarmonicPlusOne:
      d.laplacian = 6.0;
      d.grad_laplacian_norm = 0.0;
      d.hessian_frobenius_sq = 12.0;
      return d;
    case PotentialKind::AnisotropicHarmonic: {
      double w2 = 0.0;
      double w4 = 0.0;
      for (double w : spec_.frequencies) {
        w2 += w * w;
        w4 += w * w * w * w;
      }
      d.laplacian = 2.0 * w2;
      d.hessian_frobenius_sq = 4.0 * w4;
      return d;
    }
    case PotentialKind::PowerPlusOne: {
      // V = offset + r^s: Laplacian s(s+1) r^(s-2), radial derivative of it s(s+1)(s-2) r^(s-3),
      // Hessian eigenvalues s(s-1) r^(s-2) (radial) and s r^(s-2) (twice, tangential).
      const double s = spec_.exponent;
      const double r = norm(x);
      const double p2 = std::pow(r, s - 2.0);
      d.laplacian = s * (s + 1.0) * p2;
      d.grad_laplacian_norm = (s == 2.0) ? 0.0 : std::abs(s * (s + 1.0) * (s - 2.0)) * std::pow(r, s - 3.0);
      d.hessian_frobenius_sq = p2 * p2 * (s * s * (s - 1.0) * (s - 1.0) + 2.0 * s * s);
      return d;
    }
    case PotentialKind::CustomRadial: break;
  }
  throw UnsupportedError("H1 diagnostic needs analytic derivatives; custom tables are declared, not verified");
}

H1Report h1_diagnostic(const Potential& v, double radius, int directions) {
  if (!v.has_derivatives())
    throw UnsupportedError("H1 diagnostic needs analytic derivatives; custom tables are declared, not verified");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ConfigError("H1 diagnostic radius must be finite and >= 0");
  if (directions < 1) throw ConfigError("H1 diagnostic needs at least one direction");

  std::vector<Vec3> dirs;
  dirs.reserve(directions);
  for (int i = 0; i < directions; ++i) {
    const double z = 1.0 - 2.0 * radical_inverse(i + 1, 2);
    const double phi = 2.0 * kPi * radical_inverse(i + 1, 3);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }

  H1Report rep;
  rep.radius = radius;
  rep.directions = directions;
  rep.min_value = std::numeric_limits<double>::infinity();
  auto visit = [&](const Vec3& x) {
    const DerivativeSample d = v.derivatives(x);
    const double v2 = d.value * d.value;
    rep.laplacian_constant = std::max(rep.laplacian_constant, bounded_ratio(std::abs(d.laplacian), v2));
    rep.grad_laplacian_constant = std::max(rep.grad_laplacian_constant, bounded_ratio(d.grad_laplacian_norm, d.value));
    rep.hessian_constant = std::max(rep.hessian_constant, bounded_ratio(d.hessian_frobenius_sq, v2));
    if (std::isnan(d.laplacian) || std::isnan(d.grad_laplacian_norm) || std::isnan(d.hessian_frobenius_sq))
      rep.laplacian_constant = std::numeric_limits<double>::infinity();
    rep.min_value = std::min(rep.min_value, d.value);
    ++rep.points;
  };
  visit({0.0, 0.0, 0.0});
  const auto shells = static_cast<long>(std::floor(radius / kShellSpacing + 1e-9));
  for (long k = 1; k <= shells; ++k) {
    const double r = k * kShellSpacing;
    for (const auto& u : dirs) visit({r * u[0], r * u[1], r * u[2]});
  }
  rep.pass = std::isfinite(rep.laplacian_constant) && std::isfinite(rep.grad_laplacian_constant) &&
             std::isfinite(rep.hessian_constant);
  rep.normalized = rep.min_value >= 1.0;
  return rep;
}

double sublevel_integral(const Potential& v, double level, const ScalarFunction& h, const Tolerance& tol) {
  if (!std::isfinite(level)) throw ConfigError("sublevel integral needs a finite level");
  if (!(level > v.minimum())) return 0.0;
  if (v.is_radial()) {
    const double r_out = v.sublevel_radius(level);
    if (!(r_out > 0.0)) return 0.0;
    const ScalarFunction gap = [&](double r) { return level - v.radial_value(r); };
    const auto breaks = sign_changes(gap, 0.0, r_out, 256);
    const ScalarFunction integrand = [&](double r) {
      const double value = v.radial_value(r);
      return value < level ? h(value) : 0.0;
    };
    return integrate_radial(integrand, r_out, tol, breaks);
  }
  // Non-radial traps: sublevel sets are taken star-shaped about the origin and integrated
  // along rays, so the support boundary is always an interval end.
  const Vec3 hw = v.sublevel_half_widths(level);
  const double reach = 2.0 * std::sqrt(hw[0] * hw[0] + hw[1] * hw[1] + hw[2] * hw[2]);
  Tolerance ray_tol = tol;
  ray_tol.abs = tol.abs * 1e-2;
  ray_tol.rel = tol.rel * 1e-1;
  auto angular_sum = [&](int n) {
    const GaussRule rule = gauss_legendre(n);
    const int n_phi = 2 * n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ct = rule.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      double ring = 0.0;
      for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / n_phi;
        const Vec3 u{st * std::cos(phi), st * std::sin(phi), ct};
        const ScalarFunction gap = [&](double t) { return level - v({t * u[0], t * u[1], t * u[2]}); };
        const double edge = find_root_monotone(gap, 0.0, reach, {tol.abs * 1e-3, 1e-15, 400}).x;
        const ScalarFunction integrand = [&](double t) {
          const double value = v({t * u[0], t * u[1], t * u[2]});
          return value < level ? h(value) * t * t : 0.0;
        };
        ring += integrate(integrand, 0.0, edge, ray_tol).value;
      }
      total += rule.weights[i] * ring * 2.0 * kPi / n_phi;
    }
    return total;
  };
  int n = 8;
  double previous = angular_sum(n);
  while (true) {
    n *= 2;
    const double current = angular_sum(n);
    if (std::abs(current - previous) <= tol.target(current)) return current;
    if (n >= 256) throw RefinementError("angular refinement of the sublevel integral did not converge", current, previous);
    previous = current;
  }
}

}  // namespace fermigas
