#include "fermigas/thomas_fermi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fermigas {

namespace {

constexpr int kTwoSpinPanels = 1200;
constexpr int kTwoSpinOrder = 8;
constexpr int kTwoSpinCap = 500;
constexpr double kDamping = 0.5;

std::vector<double> profile_radii(double support) {
  std::vector<double> r;
  constexpr int inner = 1600;
  constexpr int outer = 80;
  for (int i = 0; i <= inner; ++i) r.push_back(support * i / inner);
  for (int i = 1; i <= outer; ++i) r.push_back(support * (1.0 + 0.05 * i / outer));
  return r;
}

double density_from_level(double lambda, double v) {
  const double gap = lambda - v;
  return gap > 0.0 ? std::pow(gap / tf_inversion_constant(), 1.5) : 0.0;
}

double support_of(const Potential& v, double lambda) {
  return v.is_radial() ? v.sublevel_radius(lambda) : v.sublevel_half_widths(lambda)[0];
}

RadialProfile density_profile(const Potential& v, double lambda, double support) {
  auto radii = profile_radii(support > 0.0 ? support : 1.0);
  std::vector<double> values;
  values.reserve(radii.size());
  for (double r : radii) values.push_back(density_from_level(lambda, v({r, 0.0, 0.0})));
  return RadialProfile(std::move(radii), std::move(values));
}

// One spin's inversion: (5/3) c s^(2/3) = t.
double spin_density(double t, double scale) { return t > 0.0 ? t * std::sqrt(t) * scale : 0.0; }

}  // namespace

double tf_constant() { return 0.6 * std::pow(6.0 * kPi * kPi, 2.0 / 3.0); }

double tf_inversion_constant() { return std::pow(3.0 * kPi * kPi, 2.0 / 3.0); }

double tf_mass_at_level(const Potential& v, double level, const Tolerance& tol) {
  const double k = tf_inversion_constant();
  return sublevel_integral(v, level, [&](double x) { return std::pow((level - x) / k, 1.5); }, tol);
}

TFSolution::TFSolution(Potential potential, double lambda, const Tolerance& tol)
    : potential_(std::move(potential)),
      lambda_(lambda),
      support_radius_(support_of(potential_, lambda_)),
      profile_(density_profile(potential_, lambda_, support_radius_)) {
  const double k = tf_inversion_constant();
  const Potential& v = potential_;
  const double lam = lambda_;
  mass_ = sublevel_integral(v, lam, [&](double x) { return std::pow((lam - x) / k, 1.5); }, tol);
  kinetic_ = sublevel_integral(v, lam, [&](double x) { return std::pow((lam - x) / k, 2.5); }, tol);
  potential_integral_ = sublevel_integral(v, lam, [&](double x) { return x * std::pow((lam - x) / k, 1.5); }, tol);
  interaction_ = sublevel_integral(v, lam, [&](double x) { return std::pow((lam - x) / k, 3.0); }, tol);
  energy_ = std::pow(2.0, -2.0 / 3.0) * tf_constant() * kinetic_ + potential_integral_;

  for (std::size_t i = 0; i < profile_.size(); ++i) {
    const double rho = profile_.values()[i];
    if (rho <= 0.0) continue;
    const double residual = std::abs(k * std::pow(rho, 2.0 / 3.0) + v({profile_.nodes()[i], 0.0, 0.0}) - lam);
    max_lagrange_residual_ = std::max(max_lagrange_residual_, residual);
  }
}

double TFSolution::density_at_level(double v) const { return density_from_level(lambda_, v); }

double TFSolution::density(const Vec3& x) const { return density_at_level(potential_(x)); }

TFSolution tf_solve(const Potential& v, const Tolerance& tol) {
  tol.validate();
  const double base = v.minimum();
  const ScalarFunction defect = [&](double level) { return tf_mass_at_level(v, level, tol) - 1.0; };
  double hi = base + 1.0;
  try {
    int doublings = 0;
    while (defect(hi) < 0.0) {
      if (++doublings > 200) throw BracketError("mass stays below one for every trial multiplier");
      hi = base + 2.0 * (hi - base);
    }
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("normalization failure: ") + e.what());
  }
  Tolerance root_tol{std::max(tol.abs, tol.rel), 1e-15, 400};
  const RootResult root = find_root_monotone(defect, base, hi, root_tol);
  return TFSolution(v, root.x, tol);
}

double tf_functional(const Potential& v, const RadialProfile& rho, const Tolerance& tol) {
  for (double x : rho.values())
    if (x < 0.0) throw DomainError("trial density has negative samples");
  if (rho.tail().kind != TailKind::Zero) throw ConfigError("trial density must have a zero tail");
  const double c = std::pow(2.0, -2.0 / 3.0) * tf_constant();
  if (!v.is_radial()) {
    const double r = rho.last_node();
    const Field density = [&](const Vec3& x) {
      const double d = std::max(rho(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0);
      return c * std::pow(d, 5.0 / 3.0) + v(x) * d;
    };
    return integrate_box(density, {-r, -r, -r}, {r, r, r}, tol);
  }
  const ScalarFunction integrand = [&](double r) {
    const double d = std::max(rho(r), 0.0);
    return c * std::pow(d, 5.0 / 3.0) + v.radial_value(r) * d;
  };
  return integrate_radial(integrand, rho.last_node(), tol, rho.nodes());
}

double tf_functional(const Potential& v, const ScalarFunction& radial_rho, double r_max, const Tolerance& tol) {
  if (!v.is_radial()) throw UnsupportedError("radial trial densities need a radial potential");
  const double c = std::pow(2.0, -2.0 / 3.0) * tf_constant();
  const ScalarFunction integrand = [&](double r) {
    const double d = radial_rho(r);
    if (d < 0.0) throw DomainError("trial density is negative");
    return c * std::pow(d, 5.0 / 3.0) + v.radial_value(r) * d;
  };
  return integrate_radial(integrand, r_max, tol);
}

TwoSpinState two_spin_minimize(const Potential& v, double coupling, const Tolerance& tol) {
  if (coupling != 0.0 && !v.is_radial()) throw UnsupportedError("two-spin minimization is implemented for radial traps");
  return two_spin_minimize(tf_solve(v, tol), coupling, tol);
}

TwoSpinState two_spin_minimize(const TFSolution& tf, double coupling, const Tolerance& tol) {
  tol.validate();
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw ConfigError("two-spin coupling must be finite and >= 0");
  const Potential& v = tf.potential();
  TwoSpinState state;
  state.coupling = coupling;
  state.multiplier = tf.lambda();

  if (coupling == 0.0) {
    const auto& prof = tf.profile();
    state.radii.assign(prof.nodes().begin(), prof.nodes().end());
    for (double x : prof.values()) {
      state.rho_up.push_back(0.5 * x);
      state.rho_down.push_back(0.5 * x);
    }
    state.energy = tf.energy();
    state.mass = tf.mass();
    return state;
  }
  if (!v.is_radial()) throw UnsupportedError("two-spin minimization is implemented for radial traps");

  const double k53 = 5.0 / 3.0 * tf_constant();
  const double inv_scale = 1.0 / std::pow(k53, 1.5);
  const double c = tf_constant();
  const double lam = tf.lambda();
  const double rho_peak = tf.density_at_level(v.minimum());
  const GaussRule rule = gauss_legendre(kTwoSpinOrder);

  double margin = 0.5 * (lam - v.minimum());
  for (int attempt = 0; attempt < 4; ++attempt, margin *= 2.0) {
    const double level_max = lam + coupling * rho_peak + margin;
    const double r_max = v.sublevel_radius(level_max);
    std::vector<double> edges;
    for (int i = 0; i <= kTwoSpinPanels; ++i) edges.push_back(r_max * i / kTwoSpinPanels);
    if (tf.support_radius() > 0.0 && tf.support_radius() < r_max) edges.push_back(tf.support_radius());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<double> r;
    std::vector<double> w;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (int q = 0; q < kTwoSpinOrder; ++q) {
        const double x = mid + half * rule.nodes[q];
        r.push_back(x);
        w.push_back(half * rule.weights[q] * 4.0 * kPi * x * x);
      }
    }
    const std::size_t n = r.size();
    std::vector<double> pot(n);
    std::vector<double> up(n);
    std::vector<double> down(n);
    for (std::size_t i = 0; i < n; ++i) {
      pot[i] = v.radial_value(r[i]);
      const double rho = tf.density_at_level(pot[i]);
      // Asymmetric start: symmetry of the result is an outcome, not an input.
      up[i] = 0.55 * rho;
      down[i] = 0.45 * rho;
    }

    std::vector<double> next_up(n);
    std::vector<double> next_down(n);
    auto invert = [&](double mu) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        next_up[i] = spin_density(mu - pot[i] - coupling * down[i], inv_scale);
        next_down[i] = spin_density(mu - pot[i] - coupling * up[i], inv_scale);
        mass += w[i] * (next_up[i] + next_down[i]);
      }
      return mass;
    };

    state.residual_history.clear();
    bool converged = false;
    bool escaped = false;
    double mu = lam;
    for (int it = 1; it <= kTwoSpinCap; ++it) {
      const double peak = std::max(*std::max_element(up.begin(), up.end()), *std::max_element(down.begin(), down.end()));
      const double hi = lam + coupling * peak + 1.0;
      const RootResult root =
          find_root_monotone([&](double m) { return invert(m) - 1.0; }, v.minimum(), hi, {1e-14, 1e-15, 400});
      mu = root.x;
      invert(mu);
      if (mu >= level_max) {
        escaped = true;
        break;
      }
      double step = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double du = kDamping * (next_up[i] - up[i]);
        const double dd = kDamping * (next_down[i] - down[i]);
        step += w[i] * (std::abs(du) + std::abs(dd));
        up[i] += du;
        down[i] += dd;
      }
      state.residual_history.push_back(step);
      state.iterations = it;
      if (step <= std::max(tol.rel, 1e-14)) {
        converged = true;
        break;
      }
    }
    if (escaped) continue;
    if (!converged) {
      std::ostringstream msg;
      msg << "two-spin fixed point did not converge in " << kTwoSpinCap << " iterations (g = " << coupling << ")";
      throw ConvergenceError(msg.str(), state.residual_history);
    }

    state.multiplier = mu;
    state.energy = 0.0;
    state.mass = 0.0;
    state.symmetry_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      state.energy += w[i] * (c * (std::pow(up[i], 5.0 / 3.0) + std::pow(down[i], 5.0 / 3.0)) +
                              pot[i] * (up[i] + down[i]) + coupling * up[i] * down[i]);
      state.mass += w[i] * (up[i] + down[i]);
      state.symmetry_gap = std::max(state.symmetry_gap, std::abs(up[i] - down[i]));
    }
    state.radii = std::move(r);
    state.rho_up = std::move(up);
    state.rho_down = std::move(down);
    return state;
  }
  throw NumericalError("two-spin density escaped the computational grid");
}

CutoffTFSolution cutoff_tf_solve(const Potential& v, double fermi_momentum, const Tolerance& tol) {
  if (!(fermi_momentum > 0.0) || !std::isfinite(fermi_momentum)) throw ConfigError("cutoff requires p_F > 0");
  return cutoff_tf_solve(tf_solve(v, tol), fermi_momentum, tol);
}

CutoffTFSolution cutoff_tf_solve(const TFSolution& tf, double fermi_momentum, const Tolerance& tol) {
  if (!(fermi_momentum > 0.0) || !std::isfinite(fermi_momentum)) throw ConfigError("cutoff requires p_F > 0");
  const Potential& v = tf.potential();
  CutoffTFSolution out;
  out.fermi_momentum = fermi_momentum;
  // Beyond the threshold the pointwise cost is linear with slope p_F^2 + V, so the multiplier
  // cannot exceed min V + p_F^2; any mass the inverted density cannot hold sits at the minimum of V.
  const double ceiling = v.minimum() + fermi_momentum * fermi_momentum;
  if (ceiling >= tf.lambda()) {
    out.energy = tf.energy();
    out.multiplier = tf.lambda();
    out.overflow_mass = 0.0;
    out.cutoff_active = false;
    return out;
  }
  const double k = tf_inversion_constant();
  const double c = std::pow(2.0, -2.0 / 3.0) * tf_constant();
  const double mass = tf_mass_at_level(v, ceiling, tol);
  const double regular = sublevel_integral(
      v, ceiling,
      [&](double x) {
        const double rho = std::pow((ceiling - x) / k, 1.5);
        return c * std::pow(rho, 5.0 / 3.0) + x * rho;
      },
      tol);
  out.multiplier = ceiling;
  out.overflow_mass = std::clamp(1.0 - mass, 0.0, 1.0);
  out.energy = regular + out.overflow_mass * ceiling;
  out.cutoff_active = true;
  return out;
}

std::vector<PerturbationStep> minimizing_sequence(const TFSolution& tf, std::span<const double> amplitudes,
                                                  const Tolerance& tol) {
  const Potential& v = tf.potential();
  if (!v.is_radial()) throw UnsupportedError("minimizing-sequence diagnostic needs a radial trap");
  const double support = tf.support_radius();
  const double second_moment = integrate_radial(
      [&](double r) { return r * r * tf.density_at_level(v.radial_value(r)); }, support, tol);
  const double spread = std::max(second_moment, support * support - second_moment);
  const ScalarFunction bump = [&](double r) { return (r * r - second_moment) / spread; };

  std::vector<PerturbationStep> steps;
  for (double t : amplitudes) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("perturbation amplitudes must lie in (0, 1]");
    const ScalarFunction trial = [&](double r) {
      return tf.density_at_level(v.radial_value(r)) * (1.0 + t * bump(r));
    };
    PerturbationStep s;
    s.amplitude = t;
    s.energy = tf_functional(v, trial, support, tol);
    const double l53 = integrate_radial(
        [&](double r) { return std::pow(std::abs(t * bump(r) * tf.density_at_level(v.radial_value(r))), 5.0 / 3.0); },
        support, tol);
    s.l53_distance = std::pow(l53, 0.6);
    steps.push_back(s);
  }
  return steps;
}

}  // namespace fermigas
