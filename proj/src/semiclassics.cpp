#include "fermigas/semiclassics.hpp"

#include <algorithm>
#include <cmath>

namespace fermigas {

PhaseSpaceBudget phase_space_counts(const Potential& v, double level, const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(level)) throw ConfigError("phase-space level must be finite");
  PhaseSpaceBudget out;
  out.level = level;
  if (level <= v.minimum()) return out;
  const double pi2 = kPi * kPi;
  out.n_cl = sublevel_integral(v, level, [&](double x) { return std::pow(level - x, 1.5); }, tol) / (6.0 * pi2);
  out.e_cl = sublevel_integral(
                 v, level,
                 [&](double x) {
                   const double g = level - x;
                   return 0.2 * g * g * std::sqrt(g) + x / 3.0 * g * std::sqrt(g);
                 },
                 tol) /
             (2.0 * pi2);
  out.e_tilde = out.e_cl - level * out.n_cl;
  return out;
}

double lambda_for_filling(const Potential& v, double target, const Tolerance& tol) {
  tol.validate();
  if (!(target > 0.0) || !std::isfinite(target)) throw ConfigError("filling target must be finite and > 0");
  const double base = v.minimum();
  const ScalarFunction defect = [&](double level) { return phase_space_counts(v, level, tol).n_cl - target; };
  double hi = base + 1.0;
  try {
    int doublings = 0;
    while (defect(hi) < 0.0) {
      if (++doublings > 200) throw BracketError("phase-space count stays below the target");
      hi = base + 2.0 * (hi - base);
    }
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("normalization failure: ") + e.what());
  }
  return find_root_monotone(defect, base, hi, {std::max(tol.abs, tol.rel * target), 1e-15, 400}).x;
}

std::vector<LegendrePoint> legendre_check(const Potential& v, const std::vector<double>& levels, const Tolerance& tol) {
  std::vector<LegendrePoint> out;
  for (double level : levels) {
    if (!(level > 0.0) || !std::isfinite(level)) throw ConfigError("Legendre check levels must be finite and > 0");
    const double h = 1e-4 * level;
    const auto lo = phase_space_counts(v, level - h, tol);
    const auto hi = phase_space_counts(v, level + h, tol);
    LegendrePoint p;
    p.level = level;
    p.de_dlevel = (hi.e_cl - lo.e_cl) / (2.0 * h);
    p.dn_dlevel = (hi.n_cl - lo.n_cl) / (2.0 * h);
    p.residual = std::abs(p.de_dlevel - level * p.dn_dlevel);
    out.push_back(p);
  }
  return out;
}

H2Report h2_probe(const Potential& v, const std::vector<double>& levels, double threshold, const Tolerance& tol) {
  if (levels.size() < 3) throw ConfigError("H2 probe needs at least three levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i])) throw ConfigError("H2 probe levels must be finite");
    if (i > 0 && !(levels[i] > levels[i - 1])) throw ConfigError("H2 probe levels must be strictly increasing");
  }
  H2Report rep;
  rep.levels = levels;
  rep.threshold = threshold;
  rep.note = "differentiability certified on the sampled grid only";
  const std::size_t n = levels.size();
  for (double level : levels) {
    rep.n_cl.push_back(phase_space_counts(v, level, tol).n_cl);
    if (level > v.minimum()) ++rep.points_above_minimum;
  }
  rep.derivative.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    rep.derivative[i] = (rep.n_cl[i + 1] - rep.n_cl[i - 1]) / (levels[i + 1] - levels[i - 1]);

  const auto& d = rep.derivative;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double spacing = levels[i] - levels[i - 1];
    if (levels[i - 1] < v.minimum() + 10.0 * spacing) continue;
    if (!(d[i - 1] > 0.0 && d[i] > 0.0 && d[i + 1] > 0.0)) continue;
    const double scale = std::max({d[i - 1], d[i], d[i + 1]});
    rep.smoothness_score = std::max(rep.smoothness_score, std::abs(d[i + 1] - 2.0 * d[i] + d[i - 1]) / scale);
  }
  rep.flagged = rep.smoothness_score > threshold;
  return rep;
}

}  // namespace fermigas
