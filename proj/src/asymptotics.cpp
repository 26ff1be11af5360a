#include "fermigas/asymptotics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace fermigas {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

ScalingContext make_scaling_context(double n, double beta, const Interaction& w, const Tolerance& tol) {
  if (!(n >= 2.0) || !std::isfinite(n)) throw ConfigError("N must be finite and >= 2");
  if (!(beta > 1.0 / 3.0) || !std::isfinite(beta)) throw ConfigError("beta must exceed 1/3 (dilute regime)");
  ScalingContext ctx;
  ctx.n = n;
  ctx.beta = beta;
  ctx.hbar = std::cbrt(1.0 / n);
  if (w.is_zero()) return ctx;
  const auto sol = zero_energy_solve(w, 4.0 * w.range(), tol);
  ctx.scattering_length = sol.scattering_length;
  ctx.range = sol.range;
  return ctx;
}

EnergyPrediction predict_energy(const TFSolution& tf, const ScalingContext& ctx) {
  EnergyPrediction out;
  out.main = ctx.n * tf.energy();
  out.correction =
      2.0 * kPi * ctx.scattering_length * std::pow(ctx.n, 4.0 / 3.0 - ctx.beta) * tf.interaction_integral();
  out.total = out.main + out.correction;
  out.relative_correction = out.correction / out.main;
  return out;
}

FirstOrderCheck first_order_check(const TFSolution& tf, const ScalingContext& ctx, const Tolerance& tol) {
  FirstOrderCheck out;
  const double scale = std::pow(ctx.n, 1.0 / 3.0 - ctx.beta);
  out.coupling = 8.0 * kPi * ctx.scattering_length * scale;
  out.two_spin_energy = two_spin_minimize(tf, out.coupling, tol).energy;
  out.linearized = tf.energy() + 2.0 * kPi * ctx.scattering_length * scale * tf.interaction_integral();
  out.scaled_defect = std::abs(out.two_spin_energy - out.linearized) / scale;
  return out;
}

namespace {

cpp_rational parse_rational(const std::string& text) {
  const auto bad = [&]() { return ConfigError("cannot read '" + text + "' as an exact number"); };
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    const auto integer = [&](const std::string& s) {
      std::size_t i = (s.size() > 0 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
      if (i >= s.size()) throw bad();
      for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw bad();
      return cpp_int(s[0] == '+' ? s.substr(1) : s);
    };
    const cpp_int q = integer(den);
    if (q == 0) throw ConfigError("zero denominator in '" + text + "'");
    return cpp_rational(integer(num), q);
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  cpp_int digits = 0;
  int scale = 0;
  bool any = false, point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (point) --scale;
      any = true;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!any) throw bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    std::size_t used = 0;
    int exponent = 0;
    try {
      exponent = std::stoi(text.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != text.size() - i - 1 || std::abs(exponent) > 400) throw bad();
    scale += exponent;
  }
  cpp_rational value(digits);
  const cpp_rational ten(10);
  for (int k = 0; k < std::abs(scale); ++k) value = scale > 0 ? cpp_rational(value * ten) : cpp_rational(value / ten);
  return negative ? cpp_rational(-value) : value;
}

BetaWindow window_for(const cpp_rational& beta, double n) {
  if (!(n >= 2.0) || !std::isfinite(n)) throw ConfigError("N must be finite and >= 2");
  const cpp_rational third(1, 3), half(1, 2);
  const cpp_rational hi = third - beta;
  const cpp_rational lo_a = -cpp_rational(27, 21) * (1 - 3 * beta) - beta;
  const cpp_rational lo_b = beta / 3 - cpp_rational(4, 9);
  const cpp_rational lo = lo_a > lo_b ? lo_a : lo_b;
  BetaWindow out;
  out.beta_exact = beta.str();
  out.beta = static_cast<double>(beta);
  out.n = n;
  out.upper_exponent = static_cast<double>(hi);
  out.lower_exponent_a = static_cast<double>(lo_a);
  out.lower_exponent_b = static_cast<double>(lo_b);
  out.feasible = hi > lo;
  out.lower_bound_regime = beta > third && beta < half;
  if (out.feasible) out.chosen_scale = std::pow(n, static_cast<double>((hi + lo) / 2));
  return out;
}

}  // namespace

BetaWindow beta_l_window(double beta, double n) {
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
  return window_for(cpp_rational(beta), n);
}

BetaWindow beta_l_window(const std::string& beta, double n) { return window_for(parse_rational(beta), n); }

namespace {

// Integral of the TF density over an axis-aligned cube by a tensor Gauss rule on `split`^3 sub-cubes.
double cube_mass(const TFSolution& tf, const Vec3& lo, double side, const GaussRule& rule, int split) {
  const double h = side / split;
  double sum = 0.0;
  for (int a = 0; a < split; ++a)
    for (int b = 0; b < split; ++b)
      for (int c = 0; c < split; ++c) {
        const Vec3 base{lo[0] + a * h, lo[1] + b * h, lo[2] + c * h};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
          for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
              const Vec3 x{base[0] + 0.5 * h * (rule.nodes[i] + 1.0), base[1] + 0.5 * h * (rule.nodes[j] + 1.0),
                           base[2] + 0.5 * h * (rule.nodes[k] + 1.0)};
              sum += rule.weights[i] * rule.weights[j] * rule.weights[k] * tf.density(x);
            }
      }
  return sum * std::pow(0.5 * h, 3);
}

}  // namespace

BoxEstimate box_estimate(const TFSolution& tf, const ScalingContext& ctx, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("box side l must be finite and > 0");
  const Vec3 half = tf.potential().sublevel_half_widths(tf.lambda());
  const double reach = std::max({half[0], half[1], half[2]});
  const double bound = std::sqrt(half[0] * half[0] + half[1] * half[1] + half[2] * half[2]);
  if (scale > 2.0 * reach * (1.0 + 1e-12))
    throw ConfigError("degenerate tiling: box side exceeds the diameter of the TF support");

  BoxEstimate out;
  out.scale = scale;
  out.gap = std::pow(ctx.n, -ctx.beta) * ctx.range;
  out.gap_ratio = out.gap / scale;
  const double cell = scale + out.gap;
  out.boxes_per_axis = static_cast<int>(std::ceil(2.0 * reach / cell * (1.0 - 1e-12)));
  if (out.boxes_per_axis > 400) throw ConfigError("box side too small: more than 400 boxes per axis");
  const double start = -0.5 * out.boxes_per_axis * cell;

  const auto window = beta_l_window(ctx.beta, ctx.n);
  out.window_feasible = window.feasible;
  const double exponent = std::log(scale) / std::log(ctx.n);
  out.scale_in_window = window.feasible && exponent < window.upper_exponent &&
                        exponent > std::max(window.lower_exponent_a, window.lower_exponent_b);

  const GaussRule rule = gauss_legendre(6);
  const double box_side = ctx.n > 0.0 ? std::pow(ctx.n, ctx.beta) * scale : 0.0;  // L
  const double prefactor = std::pow(ctx.n, 2.0 * ctx.beta - 2.0 / 3.0);
  const double c = tf_constant();
  const double half_n = 0.5 * ctx.n;
  std::vector<std::pair<Vec3, double>> masses;

  for (int a = 0; a < out.boxes_per_axis; ++a)
    for (int b = 0; b < out.boxes_per_axis; ++b)
      for (int k = 0; k < out.boxes_per_axis; ++k) {
        const Vec3 lo{start + a * cell, start + b * cell, start + k * cell};
        double nearest = 0.0;
        for (int d = 0; d < 3; ++d) {
          const double gap_d = std::max({lo[d] - 0.0, 0.0 - (lo[d] + cell), 0.0});
          nearest += gap_d * gap_d;
        }
        if (std::sqrt(nearest) >= bound) continue;
        // Cells the support boundary crosses get a finer rule.
        int inside = 0, samples = 0;
        for (int i = 0; i <= 2; ++i)
          for (int j = 0; j <= 2; ++j)
            for (int m = 0; m <= 2; ++m) {
              ++samples;
              if (tf.density({lo[0] + 0.5 * i * cell, lo[1] + 0.5 * j * cell, lo[2] + 0.5 * m * cell}) > 0.0) ++inside;
            }
        masses.push_back({lo, cube_mass(tf, lo, cell, rule, inside == samples ? 1 : 4)});
      }
  // The cells cover the support, so their quadrature masses are rescaled to the exact unit total.
  double quadrature_total = 0.0;
  for (const auto& [lo, mass] : masses) quadrature_total += mass;
  for (const auto& [lo, mass] : masses) {
    const double target = half_n * mass / quadrature_total;
    // Ceiling with an absolute guard so quadrature noise on an exact integer does not add a particle.
    const long long m_i = static_cast<long long>(std::ceil(target - 1e-9));
    if (m_i == 0) continue;

    BoxCell bc;
    bc.center = {lo[0] + 0.5 * cell, lo[1] + 0.5 * cell, lo[2] + 0.5 * cell};
    bc.mass = m_i;
    const double m = static_cast<double>(m_i);
    bc.kinetic_interaction =
        prefactor * (2.0 * c * std::pow(m, 5.0 / 3.0) / (box_side * box_side) +
                     8.0 * kPi * ctx.scattering_length * m * m / (box_side * box_side * box_side));
    double sup = tf.potential()(bc.center);
    for (int corner = 0; corner < 8; ++corner) {
      const Vec3 x{bc.center[0] + ((corner & 1) ? 0.5 : -0.5) * scale,
                   bc.center[1] + ((corner & 2) ? 0.5 : -0.5) * scale,
                   bc.center[2] + ((corner & 4) ? 0.5 : -0.5) * scale};
      sup = std::max(sup, tf.potential()(x));
    }
    bc.potential = 2.0 * m * sup;
    out.total_particles += 2 * m_i;
    out.kinetic_interaction_sum += bc.kinetic_interaction;
    out.potential_sum += bc.potential;
    const double share = 2.0 * m / ctx.n;
    out.riemann_53 += std::pow(share, 5.0 / 3.0) / (scale * scale);
    out.riemann_2 += share * share / (scale * scale * scale);
    out.cells.push_back(bc);
  }
  out.total = out.kinetic_interaction_sum + out.potential_sum;
  out.prediction_total = predict_energy(tf, ctx).total;
  out.ratio = out.total / out.prediction_total;
  out.defect_53 = std::abs(out.riemann_53 - tf.kinetic_integral()) / tf.kinetic_integral();
  out.defect_2 = std::abs(out.riemann_2 - tf.interaction_integral()) / tf.interaction_integral();
  return out;
}

ErrorBudget error_budget(double n, double beta, double epsilon) {
  if (!(n >= 2.0) || !std::isfinite(n)) throw ConfigError("N must be finite and >= 2");
  if (!(beta > 1.0 / 3.0 && beta < 0.5)) throw ConfigError("regime error: the error budget needs 1/3 < beta < 1/2");
  if (!std::isfinite(epsilon) || epsilon >= 1.0) throw ConfigError("epsilon must lie in (0, 1)");
  ErrorBudget out;
  out.n = n;
  out.beta = beta;
  const double small = std::pow(n, -1.0 / 18.0) + std::pow(n, 1.0 / 6.0 - beta / 2.0);
  out.epsilon_floor = std::pow(small, 0.25);
  out.epsilon = epsilon > 0.0 ? epsilon : std::pow(small, 0.125);
  const double eps = out.epsilon;
  out.epsilon_below_one = eps < 1.0;
  const double dilute = std::pow(n, 1.0 / 3.0 - beta);
  out.delta = eps;
  out.fermi_momentum = 1.0 / std::sqrt(eps * dilute);
  out.inverse_momentum = eps * std::sqrt(dilute);
  out.radius = eps * std::cbrt(1.0 / n);
  const double s2 = out.inverse_momentum * out.inverse_momentum;
  const double r = out.radius;
  out.term_kinetic = std::pow(n, 5.0 / 6.0);
  out.term_cutoff = eps * dilute * n;
  out.term_dyson = dilute * small * (1.0 / (r * r * r) + 1.0 / (eps * s2 * r)) / out.delta;
  out.term_spread = dilute / (eps * s2 * r);
  out.total = out.term_kinetic + out.term_cutoff + out.term_dyson + out.term_spread;
  out.ratio = out.total / std::pow(n, 4.0 / 3.0 - beta);
  return out;
}

}  // namespace fermigas
