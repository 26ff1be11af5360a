#include <cmath>
#include <random>

#include "doctest.h"
#include "fermigas/asymptotics.hpp"

using namespace fermigas;

namespace {

const TFSolution& harmonic_tf() {
  static const TFSolution tf = [] {
    PotentialSpec spec;
    spec.offset = 0.0;
    return tf_solve(make_potential(spec));
  }();
  return tf;
}

Interaction barrier(double amplitude) {
  InteractionSpec spec;
  spec.amplitude = amplitude;
  return Interaction(spec);
}

}  // namespace

TEST_CASE("energy prediction") {
  const auto ctx = make_scaling_context(1e6, 0.4, barrier(2.0));
  CHECK(ctx.hbar == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK(ctx.range == 1.0);
  const auto p = predict_energy(harmonic_tf(), ctx);
  const double a = 1.0 - std::tanh(1.0);
  const double rho2 = 64.0 / 2835.0 * std::pow(24.0, 1.5) / std::pow(kPi, 3);
  CHECK(p.main == doctest::Approx(1e6 * 0.75 * std::cbrt(24.0)).epsilon(1e-9));
  CHECK(p.correction == doctest::Approx(2.0 * kPi * a * std::pow(10.0, 5.6) * rho2).epsilon(1e-7));
  CHECK(p.correction == doctest::Approx(5.105e4).epsilon(1e-3));
  CHECK(p.total == p.main + p.correction);

  InteractionSpec none;
  none.kind = InteractionKind::Zero;
  const auto free = predict_energy(harmonic_tf(), make_scaling_context(1e6, 0.4, Interaction(none)));
  CHECK(free.correction == 0.0);
  CHECK(free.total == free.main);

  const auto steeper = predict_energy(harmonic_tf(), make_scaling_context(1e6, 0.45, barrier(2.0)));
  CHECK(steeper.correction < p.correction);

  CHECK_THROWS_AS(make_scaling_context(1.0, 0.4, barrier(2.0)), ConfigError);
  CHECK_THROWS_AS(make_scaling_context(100.0, 0.3, barrier(2.0)), ConfigError);
}

TEST_CASE("first-order consistency with the two-spin functional") {
  double previous = 1e300;
  for (double n : {1e4, 1e6, 1e8}) {
    const auto f = first_order_check(harmonic_tf(), make_scaling_context(n, 0.4, barrier(2.0)));
    CHECK(f.scaled_defect < previous);
    previous = f.scaled_defect;
  }
}

TEST_CASE("beta windows") {
  const auto at40 = beta_l_window(0.40, 1e6);
  CHECK(at40.feasible);
  CHECK(at40.lower_bound_regime);
  CHECK(at40.chosen_scale == doctest::Approx(std::pow(1e6, 0.5 * (1.0 / 3.0 - 0.4 + (-27.0 / 21.0 * (1 - 1.2) - 0.4)))));

  const auto edge = beta_l_window("34/81", 1e6);
  CHECK_FALSE(edge.feasible);
  CHECK(edge.beta_exact == "34/81");
  CHECK(edge.upper_exponent == doctest::Approx(edge.lower_exponent_a).epsilon(1e-14));
  CHECK(edge.chosen_scale == 0.0);
  CHECK(beta_l_window("0.4197", 1e6).feasible);
  CHECK_FALSE(beta_l_window("0.4198", 1e6).feasible);
  CHECK(beta_l_window("68/162", 10.0).beta_exact == "34/81");

  const auto at45 = beta_l_window(0.45, 1e6);
  CHECK_FALSE(at45.feasible);
  CHECK(at45.lower_bound_regime);
  CHECK_FALSE(beta_l_window("1/2", 1e6).lower_bound_regime);
  CHECK(beta_l_window("0.4999999", 1e6).lower_bound_regime);
  CHECK_FALSE(beta_l_window("1/3", 1e6).lower_bound_regime);

  CHECK_THROWS_AS(beta_l_window("abc", 1e6), ConfigError);
  CHECK_THROWS_AS(beta_l_window("1/0", 1e6), ConfigError);
  CHECK_THROWS_AS(beta_l_window("0.4x", 1e6), ConfigError);
  CHECK(beta_l_window("4e-1", 1e6).beta_exact == "2/5");
}

TEST_CASE("window feasibility matches integer cross-multiplication") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<long long> den(1, 100000);
  for (int i = 0; i < 500; ++i) {
    const long long q = den(gen);
    std::uniform_int_distribution<long long> num(q / 3, q / 2 + 1);
    const long long p = num(gen);
    const bool expected = 81 * p < 34 * q && 3 * p >= q - 3 * q;  // second clause always true here
    CHECK(beta_l_window(std::to_string(p) + "/" + std::to_string(q), 1e6).feasible == expected);
  }
}

TEST_CASE("single box reproduces the direct formula") {
  const auto& tf = harmonic_tf();
  const auto ctx = make_scaling_context(1e4, 0.4, barrier(2.0));
  const double side = 2.0 * tf.support_radius();
  const auto one = box_estimate(tf, ctx, side);
  REQUIRE(one.boxes_per_axis == 1);
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].mass == 5000);
  const double big_l = std::pow(1e4, 0.4) * side;
  const double expected = std::pow(1e4, 0.8 - 2.0 / 3.0) *
                          (2.0 * tf_constant() * std::pow(5000.0, 5.0 / 3.0) / (big_l * big_l) +
                           8.0 * kPi * ctx.scattering_length * 5000.0 * 5000.0 / std::pow(big_l, 3));
  CHECK(one.cells[0].kinetic_interaction == doctest::Approx(expected).epsilon(1e-12));
  // Corners of the box sit at distance sqrt(3) times the support radius.
  CHECK(one.cells[0].potential == doctest::Approx(2.0 * 5000.0 * 3.0 * tf.lambda()).epsilon(1e-9));

  CHECK_THROWS_AS(box_estimate(tf, ctx, 1.01 * side), ConfigError);
  CHECK_THROWS_AS(box_estimate(tf, ctx, 0.0), ConfigError);
}

TEST_CASE("box particles cover N") {
  const auto& tf = harmonic_tf();
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> side(0.2, 3.0), logn(3.0, 8.0);
  for (int i = 0; i < 12; ++i) {
    const double n = std::round(std::pow(10.0, logn(gen)));
    const auto est = box_estimate(tf, make_scaling_context(n, 0.4, barrier(2.0)), side(gen));
    CHECK(est.total_particles >= n);
    for (const auto& cell : est.cells) CHECK(cell.mass >= 1);
  }
}

TEST_CASE("box sums along the admissible window") {
  const auto& tf = harmonic_tf();
  const auto ctx = make_scaling_context(1e6, 0.4, barrier(2.0));
  const auto window = beta_l_window(0.4, 1e6);
  const auto est = box_estimate(tf, ctx, window.chosen_scale);
  CHECK(est.scale_in_window);
  CHECK(est.ratio >= 0.9);
  CHECK(est.ratio <= 1.3);
  CHECK(est.gap_ratio == doctest::Approx(std::pow(1e6, -0.4) / window.chosen_scale).epsilon(1e-12));
  const auto coarse = box_estimate(tf, ctx, 2.0 * window.chosen_scale);
  CHECK_FALSE(coarse.scale_in_window);
}

TEST_CASE("error budget") {
  const auto b = error_budget(1e4, 0.45, 0.5);
  CHECK(b.total == b.term_kinetic + b.term_cutoff + b.term_dyson + b.term_spread);
  CHECK(b.term_kinetic >= 0.0);
  CHECK(b.term_cutoff >= 0.0);
  CHECK(b.term_dyson >= 0.0);
  CHECK(b.term_spread >= 0.0);
  const double dilute = std::pow(1e4, 1.0 / 3.0 - 0.45);
  CHECK(b.delta == 0.5);
  CHECK(std::pow(b.fermi_momentum, -2.0) == doctest::Approx(0.5 * dilute).epsilon(1e-13));
  CHECK(b.inverse_momentum * b.inverse_momentum == doctest::Approx(0.25 * dilute).epsilon(1e-13));
  CHECK(b.radius == doctest::Approx(0.5 * std::pow(1e4, -1.0 / 3.0)).epsilon(1e-13));
  // Simplified form of the last term.
  CHECK(b.term_spread == doctest::Approx(std::pow(0.5, -4.0) * std::cbrt(1e4)).epsilon(1e-12));

  for (double beta : {0.40, 0.45, 0.49}) {
    double previous = 1e300;
    for (double n : {1e4, 1e6, 1e8}) {
      const auto e = error_budget(n, beta);
      CHECK(e.epsilon == doctest::Approx(std::pow(std::pow(n, -1.0 / 18.0) + std::pow(n, 1.0 / 6.0 - beta / 2.0), 0.125)));
      // Above the floor only once the bracket drops below 1.
      CHECK((e.epsilon > e.epsilon_floor) == e.epsilon_below_one);
      CHECK(e.ratio < previous);
      previous = e.ratio;
    }
  }
  CHECK_THROWS_AS(error_budget(1e4, 0.3), ConfigError);
  CHECK_THROWS_AS(error_budget(1e4, 0.5), ConfigError);
  CHECK_THROWS_AS(error_budget(1e4, 0.4, 1.5), ConfigError);
}
