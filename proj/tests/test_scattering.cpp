#include <cmath>
#include <random>

#include "doctest.h"
#include "fermigas/scattering.hpp"

using namespace fermigas;

namespace {

Interaction barrier(double amplitude, double radius = 1.0) {
  InteractionSpec spec;
  spec.kind = InteractionKind::SquareBarrier;
  spec.amplitude = amplitude;
  spec.radius = radius;
  return Interaction(spec);
}

Interaction bump(double amplitude, double radius = 1.0) {
  InteractionSpec spec;
  spec.kind = InteractionKind::Bump;
  spec.amplitude = amplitude;
  spec.radius = radius;
  return Interaction(spec);
}

// Interior solution sinh(k r), k = sqrt(A/2), matched to r - a at R.
double barrier_length(double amplitude, double radius) {
  const double k = std::sqrt(amplitude / 2.0);
  return radius - std::tanh(k * radius) / k;
}

void check_profile_invariants(const Interaction& v, const ScatteringSolution& s) {
  const double a = s.scattering_length;
  CHECK(a >= 0.0);
  CHECK(a <= v.range() + 1e-12);
  const auto nodes = s.u.nodes();
  const auto values = s.u.values();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double f = values[i] / nodes[i];
    CHECK(f <= 1.0 + 1e-12);
    if (nodes[i] >= v.range()) CHECK(f >= 1.0 - a / nodes[i] - 1e-8);
  }
  CHECK(s.fit_residual <= 1e-8 * nodes.back());
  CHECK(s.scattering_energy == doctest::Approx(4.0 * kPi * a).epsilon(1e-6));
}

}  // namespace

TEST_CASE("free scattering") {
  InteractionSpec spec;
  spec.kind = InteractionKind::Zero;
  const auto s = zero_energy_solve(Interaction(spec), 5.0);
  CHECK(s.scattering_length == 0.0);
  for (std::size_t i = 1; i < s.u.size(); ++i) CHECK(s.u.values()[i] / s.u.nodes()[i] == doctest::Approx(1.0));
  CHECK(zero_energy_solve(barrier(0.0), 5.0).scattering_length == 0.0);
}

TEST_CASE("square barrier closed form") {
  for (double amp : {2.0, 20.0, 200.0, 5000.0}) {
    const auto v = barrier(amp);
    const auto s = zero_energy_solve(v, 3.0);
    CHECK(std::abs(s.scattering_length - barrier_length(amp, 1.0)) <= 1e-9);
    check_profile_invariants(v, s);
  }
  CHECK(std::abs(zero_energy_solve(barrier(2.0), 2.0).scattering_length - 0.238405844044235) <= 1e-10);
  CHECK(std::abs(zero_energy_solve(barrier(200.0), 2.0).scattering_length - 0.9) <= 1e-9);

  const auto wide = zero_energy_solve(barrier(3.0, 2.5), 5.0);
  CHECK(std::abs(wide.scattering_length - barrier_length(3.0, 2.5)) <= 1e-9);
}

TEST_CASE("range guard and domain errors") {
  CHECK_THROWS_AS(zero_energy_solve(barrier(2.0), 1.5), ConfigError);
  CHECK_THROWS_AS(barrier(-1.0), ConfigError);
  CHECK_THROWS_AS(barrier(1.0, 0.0), ConfigError);
  InteractionSpec table;
  table.kind = InteractionKind::Tabulated;
  table.table_radii = {0.1, 0.2};
  table.table_values = {1.0, 1.0};
  CHECK_THROWS_AS(Interaction{table}, ConfigError);
}

TEST_CASE("tabulated constant table reproduces the barrier") {
  InteractionSpec spec;
  spec.kind = InteractionKind::Tabulated;
  spec.amplitude = 2.0;
  for (int i = 0; i < 20; ++i) {
    spec.table_radii.push_back(i / 19.0);
    spec.table_values.push_back(1.0);
  }
  const Interaction v(spec);
  CHECK(v.range() == 1.0);
  const auto s = zero_energy_solve(v, 3.0);
  CHECK(std::abs(s.scattering_length - barrier_length(2.0, 1.0)) <= 1e-9);

  // Trailing zero samples end the support at the first zero after the last positive node.
  spec.table_radii.push_back(1.5);
  spec.table_values.push_back(0.0);
  spec.table_radii.push_back(2.0);
  spec.table_values.push_back(0.0);
  spec.table_values[19] = 0.5;
  const Interaction w(spec);
  CHECK(w.range() == 1.5);
  check_profile_invariants(w, zero_energy_solve(w, 4.0));
}

TEST_CASE("smooth bump invariants") {
  for (double amp : {0.5, 10.0, 1000.0}) {
    const auto v = bump(amp, 0.7);
    check_profile_invariants(v, zero_energy_solve(v, 2.0));
  }
}

TEST_CASE("hard core limit") {
  const auto v = barrier(1.0);
  const auto sweep = hardcore_limit(v, {2.0, 20.0, 200.0});
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].scattering_length == doctest::Approx(0.2384).epsilon(1e-3));
  CHECK(sweep[1].scattering_length == doctest::Approx(0.6838).epsilon(1e-3));
  CHECK(sweep[2].scattering_length == doctest::Approx(0.9).epsilon(1e-6));
  for (std::size_t i = 0; i < sweep.size(); ++i)
    CHECK(std::abs(sweep[i].scattering_length - barrier_length(sweep[i].amplitude, 1.0)) <= 1e-9);

  const auto strong = hardcore_limit(v, {1e6});
  CHECK(1.0 - strong[0].scattering_length <= 0.002);
  CHECK(strong[0].scattering_length <= 1.0);
  CHECK(std::abs(strong[0].scattering_length - barrier_length(1e6, 1.0)) <= 1e-8);

  InteractionSpec core;
  core.kind = InteractionKind::HardCore;
  core.radius = 0.8;
  const auto s = zero_energy_solve(Interaction(core), 2.0);
  CHECK(s.scattering_length == 0.8);
  check_profile_invariants(Interaction(core), s);

  CHECK_THROWS_AS(hardcore_limit(v, {2.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(hardcore_limit(v, {0.0}), ConfigError);
}

TEST_CASE("scattering length grows with the interaction") {
  std::mt19937 gen(5u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double amp = std::pow(10.0, 3.0 * u(gen) - 1.0);
    const double radius = 0.3 + u(gen);
    const double lift = 1.0 + 2.0 * u(gen);
    const auto low = zero_energy_solve(bump(amp, radius), 3.0 * radius).scattering_length;
    const auto high = zero_energy_solve(bump(amp * lift, radius), 3.0 * radius).scattering_length;
    const auto wider = zero_energy_solve(bump(amp, 1.2 * radius), 3.0 * radius).scattering_length;
    CHECK(high >= low);
    CHECK(wider >= low);
    CHECK(high <= radius);
  }
}

TEST_CASE("dilation identity") {
  for (double n : {1e2, 1e3, 1e4}) {
    for (double beta : {0.35, 0.4, 0.45}) {
      const auto id = scaled_identity_check(barrier(2.0), n, beta);
      CHECK(id.rel_err <= 1e-8);
      const auto id_bump = scaled_identity_check(bump(7.0, 0.5), n, beta);
      CHECK(id_bump.rel_err <= 1e-8);
    }
  }
  const auto one = scaled_identity_check(barrier(2.0), 1.0, 0.4);
  CHECK(one.lhs == doctest::Approx(barrier_length(2.0, 1.0)).epsilon(1e-10));
  CHECK(one.lhs == one.rhs);
  const auto none = scaled_identity_check(barrier(0.0), 1e3, 0.4);
  CHECK(none.lhs == 0.0);
  CHECK(none.rhs == 0.0);
  CHECK_THROWS_AS(scaled_identity_check(barrier(2.0), 1e3, 0.3), ConfigError);
}

TEST_CASE("large-amplitude trend approaches the range") {
  const double beta = 0.4;
  const auto trend = large_amplitude_trend(barrier(2.0), 2.0 * beta - 2.0 / 3.0 + 0.5, beta, {1e2, 1e3, 1e4});
  REQUIRE(trend.size() == 3);
  for (std::size_t i = 1; i < trend.size(); ++i) CHECK(trend[i].scaled_length > trend[i - 1].scaled_length);
  CHECK(trend.back().scaled_length <= 1.0);
  CHECK(trend.back().scaled_length > 0.9);
  CHECK_THROWS_AS(large_amplitude_trend(barrier(2.0), 0.1, beta, {1e2}), ConfigError);
}

TEST_CASE("Dyson ingredients") {
  const auto kit = dyson_parts(0.0, 1.0, 0.5, 1.0);
  CHECK(std::abs(kit.u_integral() - 1.0) <= 1e-10);
  CHECK(kit.spread(0.5) == doctest::Approx(3.0 / (4.0 * kPi)));
  CHECK(kit.spread(1.5) == 0.0);
  CHECK(std::abs(dyson_parts(0.5, 1.0, 1.0, 1.0).u_integral() - 1.0) <= 1e-10);

  const auto unit = dyson_parts(0.0, 1.0, 1.0, 1.0);
  CHECK(unit.cutoff(1.5) == 0.5);
  CHECK(unit.cutoff(3.0) == 1.0);
  CHECK(unit.cutoff(0.5) == 0.0);
  CHECK(unit.gamma(0.0) == 0.0);
  CHECK(unit.gamma(0.5) == 0.0);
  CHECK(unit.gamma(2.0) == 0.75);

  for (double pf : {0.3, 1.0, 7.0}) {
    const auto k = dyson_parts(0.0, 1.0, 1.0 / (2.0 * pf), pf);
    const auto check = dyson_inequality_check(k, 10000, 20.0 * pf);
    CHECK(check.momenta == 10000);
    CHECK(check.violations == 0);
    CHECK(check.min_margin >= 0.0);
  }
  CHECK_THROWS_AS(dyson_parts(1.0, 1.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(dyson_parts(0.0, 1.0, 0.0, 1.0), ConfigError);
}
