#include "fermigas/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "fermigas/asymptotics.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/semiclassics.hpp"
#include "fermigas/spectra.hpp"
#include "fermigas/thomas_fermi.hpp"
#include "fermigas/verification.hpp"

namespace fermigas {

std::string version_string() { return FERMIGAS_VERSION; }

namespace {

// Results land in input order; the exception of the lowest failing index wins.
template <class T>
std::vector<T> parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& task) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(task(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> results;
  results.reserve(count);
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

ScalarFunction restrict_to_axis(const Potential& v) {
  return [v](double x) { return v(Vec3{x, 0.0, 0.0}); };
}

Table make_table(std::string name, std::vector<std::string> columns, std::vector<std::string> formulas) {
  Table t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  t.formulas = std::move(formulas);
  return t;
}

struct SweepPoint {
  double n = 0.0;
  std::string beta_text;
  double beta = 0.0;
  std::string beta_exact;
};

std::vector<SweepPoint> n_beta_grid(const RunConfig& cfg) {
  std::vector<SweepPoint> grid;
  for (double n : cfg.sweeps.n)
    for (const auto& b : cfg.sweeps.beta) {
      const auto window = beta_l_window(b, n);
      grid.push_back({n, b, window.beta, window.beta_exact});
    }
  return grid;
}

void run_tf(const RunConfig& cfg, RunResult& out) {
  const Potential v(*cfg.potential);
  const auto tf = tf_solve(v, cfg.tolerance);
  auto summary = make_table("tf_solution",
                            {"kind", "lambda", "energy", "kinetic_integral", "potential_integral",
                             "interaction_integral", "mass", "max_lagrange_residual", "support_radius"},
                            {"tf.inversion", "tf.normalization", "tf.energy"});
  summary.add_row({kind_name(v.spec().kind), tf.lambda(), tf.energy(), tf.kinetic_integral(), tf.potential_integral(),
                   tf.interaction_integral(), tf.mass(), tf.max_lagrange_residual(), tf.support_radius()});

  auto profile = make_table("tf_profile", {"r", "rho", "V", "lagrange_residual"}, {"tf.inversion", "tf.lagrange"});
  const double kappa = tf_inversion_constant();
  const int points = cfg.options.profile_points;
  const double r_end = 1.25 * tf.support_radius();
  for (int i = 0; i < points; ++i) {
    const double r = r_end * i / (points - 1);
    const Vec3 x{r, 0.0, 0.0};
    const double pot = v(x);
    const double rho = tf.density(x);
    const double residual = rho > 0.0 ? std::abs(kappa * std::pow(rho, 2.0 / 3.0) + pot - tf.lambda()) : 0.0;
    profile.add_row({r, rho, pot, residual});
  }
  out.tables.push_back(std::move(summary));
  out.tables.push_back(std::move(profile));
  out.summary = "lambda = " + format_number(tf.lambda()) + ", energy = " + format_number(tf.energy());
}

void run_scatter(const RunConfig& cfg, RunResult& out, int jobs) {
  const Interaction w(*cfg.interaction);
  const double r_max = cfg.options.r_max > 0.0 ? cfg.options.r_max : std::max(4.0 * w.range(), 1.0);
  const auto base = zero_energy_solve(w, r_max, cfg.tolerance);

  auto profile = make_table("scattering", {"r", "u", "f", "v"}, {"scattering.zero_energy_ode"});
  const auto nodes = base.u.nodes();
  const auto values = base.u.values();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    double f;
    if (r > 0.0)
      f = values[i] / r;
    else
      f = nodes.size() > 1 ? values[1] / nodes[1] : 0.0;  // u'(0)
    const double pot = w.is_hard_core() && r < w.range() ? 0.0 : w(r);
    profile.add_row({r, values[i], f, std::isfinite(pot) ? pot : 0.0});
  }

  std::vector<double> amplitudes = cfg.sweeps.amplitudes;
  if (amplitudes.empty()) amplitudes.push_back(1.0);
  auto summary = make_table("scattering_lengths",
                            {"amplitude", "scattering_length", "range", "fit_residual", "scattering_energy",
                             "energy_identity_residual", "steps"},
                            {"scattering.zero_energy_ode", "scattering.far_field", "scattering.energy_identity"});
  const auto solutions = parallel_map<ScatteringSolution>(amplitudes.size(), jobs, [&](std::size_t i) {
    return zero_energy_solve(w.scaled(amplitudes[i], 1.0), r_max, cfg.tolerance);
  });
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    const auto& s = solutions[i];
    summary.add_row({amplitudes[i], s.scattering_length, s.range, s.fit_residual, s.scattering_energy,
                     std::abs(s.scattering_energy - 4.0 * kPi * s.scattering_length),
                     static_cast<long long>(s.steps)});
  }
  out.tables.push_back(std::move(profile));
  out.tables.push_back(std::move(summary));
  out.summary = "a = " + format_number(base.scattering_length) + ", R = " + format_number(base.range);
}

void run_semiclass(const RunConfig& cfg, RunResult& out, int jobs) {
  const Potential v(*cfg.potential);
  const auto& levels = cfg.sweeps.levels;
  const auto budgets = parallel_map<PhaseSpaceBudget>(
      levels.size(), jobs, [&](std::size_t i) { return phase_space_counts(v, levels[i], cfg.tolerance); });
  const auto legendre = legendre_check(v, levels, cfg.tolerance);
  auto table = make_table("semiclass", {"Lambda", "n_cl", "e_cl", "e_tilde", "d_n_cl", "legendre_residual"},
                          {"weyl.phase_space_volume", "weyl.legendre"});
  for (std::size_t i = 0; i < levels.size(); ++i)
    table.add_row({levels[i], budgets[i].n_cl, budgets[i].e_cl, budgets[i].e_tilde, legendre[i].dn_dlevel,
                   legendre[i].residual});
  out.tables.push_back(std::move(table));

  if (levels.size() >= 5) {
    const auto h2 = h2_probe(v, levels, cfg.options.h2_threshold, cfg.tolerance);
    auto probe = make_table("semiclass_smoothness",
                            {"smoothness_score", "threshold", "flagged", "points_above_minimum", "note"},
                            {"weyl.smoothness_probe"});
    probe.add_row({h2.smoothness_score, h2.threshold, static_cast<long long>(h2.flagged),
                   static_cast<long long>(h2.points_above_minimum), h2.note});
    out.tables.push_back(std::move(probe));
  }
  out.summary = std::to_string(levels.size()) + " levels";
}

Table weyl_table(const WeylScan& scan) {
  auto t = make_table("weyl_scan", {"N", "hbar", "n_q", "n_cl_scaled", "n_err", "e_q", "e_cl_scaled", "e_err"},
                      {"spectra.sturm_count", "weyl.counting"});
  for (const auto& row : scan.rows)
    t.add_row({row.n, row.hbar, row.n_q, row.n_cl_scaled, row.n_err, row.e_q, row.e_cl_scaled, row.e_err});
  return t;
}

Table weyl_fit_table(const WeylScan& scan) {
  auto t = make_table("weyl_fit", {"number_exponent", "energy_exponent", "exponents_defined"}, {"weyl.counting"});
  t.add_row({scan.exponents_defined ? scan.number_exponent : 0.0, scan.exponents_defined ? scan.energy_exponent : 0.0,
             static_cast<long long>(scan.exponents_defined)});
  return t;
}

void run_spectra(const RunConfig& cfg, RunResult& out) {
  const auto& o = cfg.options;
  SpectralCatalog catalog;
  std::optional<WeylScan> scan;
  if (o.trap == "harmonic_3d") {
    const double offset = cfg.potential ? cfg.potential->offset : 0.0;
    if (cfg.potential && cfg.potential->kind != PotentialKind::HarmonicPlusOne)
      throw ConfigError("spectra with trap harmonic_3d needs a harmonic_plus_one potential");
    const double level = o.level > 0.0 ? o.level : std::cbrt(48.0) + offset;
    catalog = harmonic_catalog(o.hbar, level, offset);
    if (!cfg.sweeps.n.empty()) scan = weyl_scan_harmonic_3d(cfg.sweeps.n, level, offset, cfg.tolerance);
  } else {
    const auto v = restrict_to_axis(Potential(*cfg.potential));
    FdOptions fd;
    fd.half_width = o.half_width;
    fd.points = o.points;
    fd.level_max = o.level > 0.0 ? o.level : 1.2;
    catalog = fd_catalog_1d(v, o.hbar, fd);
    if (!cfg.sweeps.n.empty()) scan = weyl_scan_1d(v, cfg.sweeps.n, fd.level_max, o.half_width, cfg.tolerance);
  }
  auto levels = make_table("spectra_levels", {"index", "level", "degeneracy", "refinement_error", "extrapolated"},
                           {"spectra.sturm_count"});
  for (std::size_t i = 0; i < catalog.levels.size(); ++i) {
    const auto& l = catalog.levels[i];
    levels.add_row({static_cast<long long>(i), l.energy, l.degeneracy, l.refinement_error, l.extrapolated});
  }
  out.tables.push_back(std::move(levels));
  if (scan) {
    out.tables.push_back(weyl_table(*scan));
    out.tables.push_back(weyl_fit_table(*scan));
  }
  if (o.free_states > 0) {
    const FreeGroundState rho(o.hbar, o.free_states);
    auto density = make_table("free_density", {"r", "density"}, {"spectra.free_ground_state"});
    const int points = o.profile_points;
    for (int i = 0; i < points; ++i) {
      const double r = rho.cutoff_radius() * i / (points - 1);
      density.add_row({r, rho(r)});
    }
    out.tables.push_back(std::move(density));
  }
  out.summary = std::to_string(catalog.levels.size()) + " levels below " + format_number(catalog.level_max);
}

HusimiReport husimi_at(const RunConfig& cfg, const ScalarFunction& v, double hbar) {
  const auto& o = cfg.options;
  FdOptions fd;
  fd.half_width = o.half_width;
  fd.points = o.points;
  fd.keep_states = true;
  HusimiOptions ho;
  ho.fermi_momentum = o.fermi_momentum;
  if (o.level > 0.0) {
    fd.level_max = o.level;
    return coherent_identity_check_1d(fd_catalog_1d(v, hbar, fd), v, o.fill, ho);
  }
  // Raise the truncation level until the catalog holds the filled states.
  const double base = v(0.0);
  double excess = 2.0 * o.fill * hbar;
  for (int attempt = 0; attempt < 8; ++attempt, excess *= 1.5) {
    fd.level_max = base + excess;
    auto catalog = fd_catalog_1d(v, hbar, fd);
    if (static_cast<int>(catalog.levels.size()) > o.fill) return coherent_identity_check_1d(catalog, v, o.fill, ho);
  }
  throw ConfigError("could not find a truncation level holding the filled states; set options.level");
}

void run_husimi(const RunConfig& cfg, RunResult& out, int jobs) {
  const auto v = restrict_to_axis(Potential(*cfg.potential));
  std::vector<double> hbars = cfg.sweeps.hbar;
  if (hbars.empty()) hbars.push_back(cfg.options.hbar);
  const auto reports =
      parallel_map<HusimiReport>(hbars.size(), jobs, [&](std::size_t i) { return husimi_at(cfg, v, hbars[i]); });
  auto t = make_table("husimi",
                      {"hbar", "hbar_x", "hbar_p", "fill", "x_nodes", "p_nodes", "resolution_residual",
                       "kinetic_husimi", "kinetic_trace", "kinetic_identity_residual", "potential_husimi",
                       "potential_trace", "potential_identity_residual", "lowfreq_identity_residual", "m_min",
                       "m_max"},
                      {"husimi.resolution", "husimi.kinetic", "husimi.potential", "husimi.low_frequency"});
  for (const auto& r : reports)
    t.add_row({r.hbar, r.hbar_x, r.hbar_p, static_cast<long long>(r.fill), static_cast<long long>(r.x_nodes),
               static_cast<long long>(r.p_nodes), r.resolution_residual, r.kinetic_husimi, r.kinetic_trace,
               r.kinetic_identity_residual, r.potential_husimi, r.potential_trace, r.potential_identity_residual,
               r.lowfreq_identity_residual, r.m_min, r.m_max});
  out.tables.push_back(std::move(t));
  out.summary = std::to_string(reports.size()) + " Husimi checks";
}

void run_predict(const RunConfig& cfg, RunResult& out, int jobs) {
  const auto tf = tf_solve(Potential(*cfg.potential), cfg.tolerance);
  const Interaction w(*cfg.interaction);
  const auto grid = n_beta_grid(cfg);
  const auto rows = parallel_map<std::pair<ScalingContext, EnergyPrediction>>(grid.size(), jobs, [&](std::size_t i) {
    const auto ctx = make_scaling_context(grid[i].n, grid[i].beta, w, cfg.tolerance);
    return std::make_pair(ctx, predict_energy(tf, ctx));
  });
  auto t = make_table("prediction",
                      {"N", "beta", "beta_exact", "scattering_length", "main", "correction", "total",
                       "relative_correction"},
                      {"energy.leading_order", "energy.dilute_correction", "scattering.dilation"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& [ctx, p] = rows[i];
    t.add_row({grid[i].n, grid[i].beta, grid[i].beta_exact, ctx.scattering_length, p.main, p.correction, p.total,
               p.relative_correction});
  }
  out.tables.push_back(std::move(t));
  out.summary = std::to_string(grid.size()) + " predictions";
}

void run_boxes(const RunConfig& cfg, RunResult& out, int jobs) {
  const auto tf = tf_solve(Potential(*cfg.potential), cfg.tolerance);
  const Interaction w(*cfg.interaction);
  const auto grid = n_beta_grid(cfg);
  const auto estimates = parallel_map<BoxEstimate>(grid.size(), jobs, [&](std::size_t i) {
    double scale = cfg.options.scale;
    if (scale <= 0.0) {
      scale = beta_l_window(grid[i].beta_text, grid[i].n).chosen_scale;
      if (scale <= 0.0)
        throw ConfigError("box scale window is empty for beta = " + grid[i].beta_exact + "; set options.scale");
    }
    return box_estimate(tf, make_scaling_context(grid[i].n, grid[i].beta, w, cfg.tolerance), scale);
  });
  auto t = make_table("boxes",
                      {"N", "beta", "beta_exact", "scale", "gap", "gap_ratio", "boxes_per_axis", "cells",
                       "total_particles", "kinetic_interaction_sum", "potential_sum", "total", "prediction_total",
                       "ratio", "riemann_53", "riemann_2", "defect_53", "defect_2", "window_feasible",
                       "scale_in_window"},
                      {"boxes.kinetic_interaction", "boxes.window", "energy.leading_order"});
  auto cells = make_table("box_cells",
                          {"N", "beta", "center_x", "center_y", "center_z", "mass", "kinetic_interaction",
                           "potential"},
                          {"boxes.kinetic_interaction"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& e = estimates[i];
    t.add_row({grid[i].n, grid[i].beta, grid[i].beta_exact, e.scale, e.gap, e.gap_ratio,
               static_cast<long long>(e.boxes_per_axis), static_cast<long long>(e.cells.size()), e.total_particles,
               e.kinetic_interaction_sum, e.potential_sum, e.total, e.prediction_total, e.ratio, e.riemann_53,
               e.riemann_2, e.defect_53, e.defect_2, static_cast<long long>(e.window_feasible),
               static_cast<long long>(e.scale_in_window)});
    for (const auto& c : e.cells)
      cells.add_row({grid[i].n, grid[i].beta, c.center[0], c.center[1], c.center[2], c.mass, c.kinetic_interaction,
                     c.potential});
  }
  out.tables.push_back(std::move(t));
  out.tables.push_back(std::move(cells));
  out.summary = std::to_string(grid.size()) + " box estimates";
}

void run_budget(const RunConfig& cfg, RunResult& out) {
  auto t = make_table("budget",
                      {"N", "beta", "beta_exact", "epsilon", "delta", "fermi_momentum", "inverse_momentum", "radius",
                       "term_kinetic", "term_cutoff", "term_dyson", "term_spread", "total", "ratio", "epsilon_floor",
                       "epsilon_below_one"},
                      {"budget.terms", "budget.epsilon_rule"});
  for (const auto& p : n_beta_grid(cfg)) {
    const auto b = error_budget(p.n, p.beta, cfg.options.epsilon);
    t.add_row({p.n, p.beta, p.beta_exact, b.epsilon, b.delta, b.fermi_momentum, b.inverse_momentum, b.radius,
               b.term_kinetic, b.term_cutoff, b.term_dyson, b.term_spread, b.total, b.ratio, b.epsilon_floor,
               static_cast<long long>(b.epsilon_below_one)});
  }
  out.summary = std::to_string(t.rows.size()) + " budget rows";
  out.tables.push_back(std::move(t));
}

void run_verify(RunResult& out, int jobs) {
  const auto results = parallel_map<CriterionResult>(
      kCriterionCount, jobs, [](std::size_t i) { return run_criterion(static_cast<int>(i) + 1); });
  auto t = make_table("verification", {"id", "criterion", "status", "measured", "threshold", "note"},
                      {"acceptance.suite"});
  std::string summary;
  for (const auto& r : results) {
    t.add_row({static_cast<long long>(r.id), r.name, std::string(r.pass ? "PASS" : "FAIL"), r.measured, r.threshold,
               r.note});
    if (!r.pass) ++out.failures;
    summary += (r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name + ": " + r.measured + "\n";
  }
  summary += std::to_string(results.size() - out.failures) + "/" + std::to_string(results.size()) + " passed";
  out.summary = summary;
  out.tables.push_back(std::move(t));
}

}  // namespace

RunResult execute(const RunConfig& cfg, int jobs) {
  validate_run_config(cfg);
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  RunResult out;
  const auto& c = cfg.command;
  if (c == "tf")
    run_tf(cfg, out);
  else if (c == "scatter")
    run_scatter(cfg, out, jobs);
  else if (c == "semiclass")
    run_semiclass(cfg, out, jobs);
  else if (c == "spectra")
    run_spectra(cfg, out);
  else if (c == "husimi")
    run_husimi(cfg, out, jobs);
  else if (c == "predict")
    run_predict(cfg, out, jobs);
  else if (c == "boxes")
    run_boxes(cfg, out, jobs);
  else if (c == "budget")
    run_budget(cfg, out);
  else
    run_verify(out, jobs);
  return out;
}

RunResult run(const RunConfig& cfg, int jobs) {
  auto result = execute(cfg, jobs);
  write_tables(result.tables, Provenance{version_string(), resolved_config_json(cfg)}, cfg.output_directory,
               cfg.json_mirror);
  return result;
}

}  // namespace fermigas
