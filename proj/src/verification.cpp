#include "fermigas/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "fermigas/asymptotics.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/semiclassics.hpp"
#include "fermigas/spectra.hpp"
#include "fermigas/thomas_fermi.hpp"

namespace fermigas {

namespace {

// Pinned acceptance thresholds.
constexpr double kLambdaTol = 1e-6;
constexpr double kLambdaSeconds = 1.0;
constexpr double kEnergyTol = 1e-5;
constexpr double kInteractionTol = 1e-4;
constexpr double kLagrangeRel = 1e-8;
constexpr double kScatteringTol = 1e-6;
constexpr double kHardCoreFloor = 0.985;
constexpr double kHardCoreSeconds = 5.0;
constexpr double kDilationTol = 1e-8;
constexpr double kWeylExponent = 8.0 / 9.0 + 0.05;
constexpr double kWeylSeconds = 10.0;
constexpr double kLegendreRel = 1e-3;
constexpr double kCutoffExponent = 1.8;
constexpr double kTwoSpinRel = 0.05;
constexpr double kSymmetryGap = 1e-6;
constexpr double kDysonMass = 1e-10;
constexpr double kBoxRatioLo = 0.9;
constexpr double kBoxRatioHi = 1.3;
constexpr double kResolutionTol = 1e-6;
constexpr double kKineticTol = 1e-6;
constexpr double kHalvingFactor = 1.3;
constexpr double kOccupationSlack = 1e-12;
constexpr double kFreeL1 = 0.05;
constexpr double kFreeMassRel = 1e-6;

CriterionResult start(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + num(xs[i]);
  return out;
}

bool strictly_decreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] < xs[i - 1])) return false;
  return true;
}

Potential trap(PotentialKind kind, double offset, double exponent = 2.0) {
  PotentialSpec spec;
  spec.kind = kind;
  spec.offset = offset;
  spec.exponent = exponent;
  return Potential(spec);
}

Potential bare_harmonic() { return trap(PotentialKind::HarmonicPlusOne, 0.0); }

Interaction barrier(double amplitude) {
  InteractionSpec spec;
  spec.kind = InteractionKind::SquareBarrier;
  spec.amplitude = amplitude;
  spec.radius = 1.0;
  return Interaction(spec);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kLambdaHarmonic = std::cbrt(24.0);
const double kInteractionHarmonic = 64.0 / 2835.0 * std::pow(24.0, 1.5) / std::pow(kPi, 3);

CriterionResult tf_multiplier() {
  auto r = start(1, "tf_chemical_potential");
  const auto t0 = std::chrono::steady_clock::now();
  const auto tf = tf_solve(bare_harmonic());
  r.seconds = seconds_since(t0);
  const double err = std::abs(tf.lambda() - kLambdaHarmonic);
  r.pass = err <= kLambdaTol && r.seconds < kLambdaSeconds;
  r.measured = "lambda=" + num(tf.lambda()) + " err=" + num(err);
  r.threshold = "err<=" + num(kLambdaTol) + " runtime<" + num(kLambdaSeconds) + "s";
  if (r.seconds >= kLambdaSeconds) r.note = "runtime limit exceeded";
  return r;
}

CriterionResult tf_energy() {
  auto r = start(2, "tf_energy");
  const auto tf = tf_solve(bare_harmonic());
  const double e_err = std::abs(tf.energy() - 0.75 * kLambdaHarmonic);
  const double i_err = std::abs(tf.interaction_integral() - kInteractionHarmonic);
  r.pass = e_err <= kEnergyTol && i_err <= kInteractionTol;
  r.measured = "energy=" + num(tf.energy()) + " err=" + num(e_err) + "; rho2=" + num(tf.interaction_integral()) +
               " err=" + num(i_err);
  r.threshold = "energy err<=" + num(kEnergyTol) + " rho2 err<=" + num(kInteractionTol);
  return r;
}

CriterionResult lagrange() {
  auto r = start(3, "lagrange_residual");
  const auto harmonic = tf_solve(trap(PotentialKind::HarmonicPlusOne, 1.0));
  const auto power = tf_solve(trap(PotentialKind::PowerPlusOne, 1.0, 4.0));
  const double rh = harmonic.max_lagrange_residual() / harmonic.lambda();
  const double rp = power.max_lagrange_residual() / power.lambda();
  r.pass = rh <= kLagrangeRel && rp <= kLagrangeRel;
  r.measured = "harmonic=" + num(rh) + " power4=" + num(rp);
  r.threshold = "residual/lambda<=" + num(kLagrangeRel);
  return r;
}

CriterionResult scattering_closed_form() {
  auto r = start(4, "scattering_closed_form");
  const double a2 = zero_energy_solve(barrier(2.0), 4.0).scattering_length;
  const double a200 = zero_energy_solve(barrier(200.0), 4.0).scattering_length;
  const double e2 = std::abs(a2 - (1.0 - std::tanh(1.0)));
  const double e200 = std::abs(a200 - (1.0 - std::tanh(10.0) / 10.0));
  r.pass = e2 <= kScatteringTol && e200 <= kScatteringTol;
  r.measured = "a(2)=" + num(a2) + " err=" + num(e2) + "; a(200)=" + num(a200) + " err=" + num(e200);
  r.threshold = "err<=" + num(kScatteringTol);
  return r;
}

CriterionResult hard_core() {
  auto r = start(5, "hard_core_limit");
  std::vector<double> amplitudes;
  for (int k = 0; k < 12; ++k) amplitudes.push_back(std::pow(10.0, 4.0 * k / 11.0));
  const auto t0 = std::chrono::steady_clock::now();
  const auto sweep = hardcore_limit(barrier(1.0), amplitudes);
  r.seconds = seconds_since(t0);
  bool monotone = true, bounded = true;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (i > 0 && sweep[i].scattering_length < sweep[i - 1].scattering_length) monotone = false;
    if (sweep[i].scattering_length > 1.0) bounded = false;
  }
  const double last = sweep.back().scattering_length;
  r.pass = monotone && bounded && last >= kHardCoreFloor && r.seconds < kHardCoreSeconds;
  r.measured = "a(1e4)=" + num(last) + " monotone=" + (monotone ? "yes" : "no") + " bounded=" +
               (bounded ? "yes" : "no");
  r.threshold = "a(1e4)>=" + num(kHardCoreFloor) + " a<=R nondecreasing runtime<" + num(kHardCoreSeconds) + "s";
  if (r.seconds >= kHardCoreSeconds) r.note = "runtime limit exceeded";
  return r;
}

CriterionResult dilation() {
  auto r = start(6, "dilation_identity");
  double worst = 0.0;
  for (double n : {1e2, 1e4})
    for (double beta : {0.35, 0.45}) worst = std::max(worst, scaled_identity_check(barrier(2.0), n, beta).rel_err);
  r.pass = worst <= kDilationTol;
  r.measured = "max rel err=" + num(worst);
  r.threshold = "<=" + num(kDilationTol);
  return r;
}

CriterionResult weyl() {
  auto r = start(7, "weyl_scan");
  const auto t0 = std::chrono::steady_clock::now();
  const auto scan = weyl_scan_harmonic_3d({1e3, 1e4, 1e5, 1e6}, std::cbrt(48.0));
  r.seconds = seconds_since(t0);
  std::vector<double> n_rel, e_rel;
  for (const auto& row : scan.rows) {
    n_rel.push_back(row.n_err / row.n);
    e_rel.push_back(row.e_err / row.n);
  }
  const bool exponents_ok = scan.exponents_defined && scan.number_exponent <= kWeylExponent &&
                            scan.energy_exponent <= kWeylExponent;
  const bool n_dec = strictly_decreasing(n_rel), e_dec = strictly_decreasing(e_rel);
  r.pass = exponents_ok && n_dec && e_dec && r.seconds < kWeylSeconds;
  r.measured = "exponents n=" + num(scan.number_exponent) + " e=" + num(scan.energy_exponent) + "; n_err/N=" +
               list(n_rel) + "; e_err/N=" + list(e_rel);
  r.threshold = "exponents<=" + num(kWeylExponent) + " err/N strictly decreasing runtime<" + num(kWeylSeconds) + "s";
  if (!n_dec || !e_dec) r.note = "shell filling makes err/N oscillate between decades";
  if (r.seconds >= kWeylSeconds) r.note += (r.note.empty() ? "" : "; ") + std::string("runtime limit exceeded");
  return r;
}

CriterionResult legendre() {
  auto r = start(8, "legendre_relation");
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(1.5 + 0.2 * i);
  double worst = 0.0;
  for (const auto& p : legendre_check(trap(PotentialKind::HarmonicPlusOne, 1.0), grid))
    worst = std::max(worst, p.residual / (p.level * std::abs(p.dn_dlevel)));
  r.pass = worst <= kLegendreRel;
  r.measured = "max scaled residual=" + num(worst);
  r.threshold = "<=" + num(kLegendreRel);
  return r;
}

CriterionResult cutoff() {
  auto r = start(9, "cutoff_tf");
  const auto tf = tf_solve(bare_harmonic());
  const std::vector<double> momenta{4.0, 8.0, 16.0, 32.0};
  std::vector<double> gaps;
  bool nonnegative = true, any_active = false;
  for (double pf : momenta) {
    const auto c = cutoff_tf_solve(tf, pf);
    gaps.push_back(tf.energy() - c.energy);
    if (gaps.back() < 0.0) nonnegative = false;
    any_active = any_active || c.cutoff_active;
  }
  r.threshold = "gaps>=0 exponent>=" + num(kCutoffExponent);
  bool all_zero = true, all_positive = true;
  for (double g : gaps) {
    all_zero = all_zero && g == 0.0;
    all_positive = all_positive && g > 0.0;
  }
  if (all_zero) {
    // The gap vanishes identically once p_F exceeds the largest local Fermi momentum.
    r.pass = nonnegative && !any_active;
    r.measured = "gaps=" + list(gaps) + " exponent=inf (cutoff inactive, gaps exactly 0)";
    r.note = "largest local Fermi momentum " + num(std::sqrt(tf.lambda() - tf.potential().minimum()));
  } else if (all_positive) {
    const double slope = -fit_log_slope(momenta, gaps);
    r.pass = nonnegative && slope >= kCutoffExponent;
    r.measured = "gaps=" + list(gaps) + " exponent=" + num(slope);
  } else {
    r.pass = false;
    r.measured = "gaps=" + list(gaps);
    r.note = "gaps partly zero, exponent undefined";
  }
  return r;
}

CriterionResult two_spin() {
  auto r = start(10, "two_spin_perturbation");
  const auto tf = tf_solve(bare_harmonic());
  const double target = 0.25 * tf.interaction_integral();
  std::vector<double> defects;
  double gap = 0.0;
  for (double g : {0.2, 0.1, 0.05}) {
    const auto s = two_spin_minimize(tf, g);
    defects.push_back(std::abs((s.energy - tf.energy()) / g - target));
    gap = std::max(gap, s.symmetry_gap);
  }
  const double rel = defects.back() / target;
  r.pass = strictly_decreasing(defects) && rel <= kTwoSpinRel && gap <= kSymmetryGap;
  r.measured = "defects=" + list(defects) + " rel(0.05)=" + num(rel) + " gap=" + num(gap);
  r.threshold = "decreasing rel<=" + num(kTwoSpinRel) + " gap<=" + num(kSymmetryGap);
  return r;
}

CriterionResult dyson() {
  auto r = start(11, "dyson_kit");
  const double pf = 2.0;
  const auto kit = dyson_parts(0.0, 1.0, 1.0 / (2.0 * pf), pf);
  const double mass_err = std::abs(kit.u_integral() - 1.0);
  const auto check = dyson_inequality_check(kit, 10000, 20.0 * pf);
  r.pass = mass_err <= kDysonMass && check.violations == 0 && check.momenta == 10000;
  r.measured = "int U err=" + num(mass_err) + " violations=" + std::to_string(check.violations) +
               " min margin=" + num(check.min_margin);
  r.threshold = "err<=" + num(kDysonMass) + " violations=0 of 10000";
  return r;
}

CriterionResult windows() {
  auto r = start(12, "beta_windows");
  const bool below = beta_l_window("33999999999/81000000000", 1e6).feasible;
  const bool at = beta_l_window("34/81", 1e6).feasible;
  const bool above = beta_l_window("34000000001/81000000000", 1e6).feasible;
  const bool lb_below = beta_l_window("499999999999/1000000000000", 1e6).lower_bound_regime;
  const bool lb_at = beta_l_window("1/2", 1e6).lower_bound_regime;
  r.pass = below && !at && !above && lb_below && !lb_at;
  const auto yn = [](bool b) { return std::string(b ? "1" : "0"); };
  r.measured = "feasible(34/81-,34/81,34/81+)=" + yn(below) + yn(at) + yn(above) + " lower(1/2-,1/2)=" + yn(lb_below) +
               yn(lb_at);
  r.threshold = "feasible 100, lower 10";
  return r;
}

CriterionResult boxes() {
  auto r = start(13, "box_estimator");
  const auto tf = tf_solve(bare_harmonic());
  const auto w = barrier(2.0);
  std::vector<double> ratios, d53, d2, scales;
  for (double n : {1e6, 1e8, 1e10}) {
    const auto window = beta_l_window(0.4, n);
    const auto est = box_estimate(tf, make_scaling_context(n, 0.4, w), window.chosen_scale);
    ratios.push_back(est.ratio);
    d53.push_back(est.defect_53);
    d2.push_back(est.defect_2);
    scales.push_back(est.scale);
  }
  r.pass = ratios[0] >= kBoxRatioLo && ratios[0] <= kBoxRatioHi && strictly_decreasing(scales) &&
           strictly_decreasing(d53) && strictly_decreasing(d2);
  r.measured = "ratio(1e6)=" + num(ratios[0]) + " l=" + list(scales) + " d53=" + list(d53) + " d2=" + list(d2);
  r.threshold = "ratio in [" + num(kBoxRatioLo) + "," + num(kBoxRatioHi) + "], defects decreasing as l shrinks";
  r.note = "ratios at 1e8 1e10: " + num(ratios[1]) + " " + num(ratios[2]);
  return r;
}

CriterionResult budget() {
  auto r = start(14, "error_budget");
  bool ok = true;
  std::string measured;
  for (double beta : {0.40, 0.45, 0.49}) {
    std::vector<double> ratios;
    for (double n : {1e4, 1e6, 1e8}) ratios.push_back(error_budget(n, beta).ratio);
    ok = ok && strictly_decreasing(ratios);
    measured += (measured.empty() ? "" : "; ") + ("beta=" + num(beta) + ": " + list(ratios));
  }
  r.pass = ok;
  r.measured = measured;
  r.threshold = "ratio strictly decreasing in N";
  return r;
}

SpectralCatalog oscillator_1d(double hbar) {
  FdOptions opt;
  opt.half_width = 2.5;
  opt.points = 1200;
  opt.level_max = 1.2;
  opt.keep_states = true;
  return fd_catalog_1d([](double x) { return x * x; }, hbar, opt);
}

CriterionResult husimi() {
  auto r = start(15, "husimi_identities");
  const ScalarFunction square = [](double x) { return x * x; };
  const auto coarse = coherent_identity_check_1d(oscillator_1d(0.05), square, 10);
  const auto fine = coherent_identity_check_1d(oscillator_1d(0.025), square, 20);
  const double halving = coarse.potential_identity_residual / fine.potential_identity_residual;
  const double resolution = std::max(coarse.resolution_residual, fine.resolution_residual);
  const double kinetic = std::max(coarse.kinetic_identity_residual, fine.kinetic_identity_residual);
  const double m_min = std::min(coarse.m_min, fine.m_min), m_max = std::max(coarse.m_max, fine.m_max);
  r.pass = resolution <= kResolutionTol && kinetic <= kKineticTol && halving >= kHalvingFactor &&
           m_min >= -kOccupationSlack && m_max <= 1.0 + kOccupationSlack;
  r.measured = "resolution=" + num(resolution) + " kinetic=" + num(kinetic) + " halving=" + num(halving) +
               " m in [" + num(m_min) + "," + num(m_max) + "]";
  r.threshold = "resolution<=" + num(kResolutionTol) + " kinetic<=" + num(kKineticTol) + " halving>=" +
                num(kHalvingFactor) + " m in [0,1]";
  return r;
}

CriterionResult free_density() {
  auto r = start(16, "free_ground_state");
  const auto tf = tf_solve(bare_harmonic());
  const double support = tf.support_radius();
  std::vector<double> l1;
  double worst_mass = 0.0;
  for (double n : {1e2, 1e3, 1e4}) {
    const long long m = static_cast<long long>(std::ceil(n / 2.0));
    const FreeGroundState rho(std::cbrt(1.0 / n), m);
    worst_mass = std::max(worst_mass, std::abs(rho.mass() - m) / m);
    const double r_max = std::max(rho.cutoff_radius(), support);
    const double breaks[] = {support};
    l1.push_back(integrate_radial(
        [&](double x) { return std::abs(2.0 * rho(x) / n - tf.density_at_level(tf.potential().radial_value(x))); },
        r_max, Tolerance{1e-10, 1e-8, 4000}, breaks));
  }
  r.pass = strictly_decreasing(l1) && l1.back() <= kFreeL1 && worst_mass <= kFreeMassRel;
  r.measured = "L1=" + list(l1) + " mass rel err=" + num(worst_mass);
  r.threshold = "L1 decreasing, L1(1e4)<=" + num(kFreeL1) + " mass err<=" + num(kFreeMassRel);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  static const std::vector<std::function<CriterionResult()>> checks{
      tf_multiplier, tf_energy, lagrange, scattering_closed_form, hard_core, dilation, weyl, legendre,
      cutoff,        two_spin,  dyson,    windows,                boxes,     budget,   husimi, free_density};
  static const char* names[] = {"tf_chemical_potential", "tf_energy",          "lagrange_residual",
                                "scattering_closed_form", "hard_core_limit",   "dilation_identity",
                                "weyl_scan",              "legendre_relation", "cutoff_tf",
                                "two_spin_perturbation",  "dyson_kit",         "beta_windows",
                                "box_estimator",          "error_budget",      "husimi_identities",
                                "free_ground_state"};
  if (id < 1 || id > kCriterionCount) throw ConfigError("no acceptance criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto r = checks[id - 1]();
    if (r.seconds == 0.0) r.seconds = seconds_since(t0);
    return r;
  } catch (const std::exception& e) {
    auto r = start(id, names[id - 1]);
    r.pass = false;
    r.measured = "error";
    r.note = e.what();
    r.seconds = seconds_since(t0);
    return r;
  }
}

std::vector<CriterionResult> run_all_criteria() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
  return out;
}

}  // namespace fermigas
