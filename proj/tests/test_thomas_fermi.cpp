#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "fermigas/thomas_fermi.hpp"

using namespace fermigas;

namespace {

Potential bare_harmonic() {
  PotentialSpec spec;
  spec.offset = 0.0;
  return make_potential(spec);
}

const double kLambdaHarmonic = std::cbrt(24.0);
// int rho^2 for the bare harmonic trap: (64/2835) 24^(3/2) / pi^3.
const double kInteractionHarmonic = 64.0 / 2835.0 * std::pow(24.0, 1.5) / std::pow(kPi, 3);

}  // namespace

TEST_CASE("functional constants") {
  const double six_pi2 = 6.0 * kPi * kPi;
  CHECK(std::abs(tf_constant() - 0.6 * std::cbrt(six_pi2 * six_pi2)) <= 1e-12);
  CHECK(std::abs(tf_inversion_constant() - std::cbrt(0.25 * six_pi2 * six_pi2)) <= 1e-12);
  CHECK(tf_constant() == doctest::Approx(9.1156).epsilon(1e-5));
  CHECK(tf_inversion_constant() == doctest::Approx(9.5708).epsilon(1e-5));
  CHECK(tf_inversion_constant() == doctest::Approx(5.0 / 3.0 * std::pow(2.0, -2.0 / 3.0) * tf_constant()).epsilon(1e-14));
}

TEST_CASE("harmonic minimizer matches the closed form") {
  const auto tf = tf_solve(bare_harmonic());
  CHECK(std::abs(tf.lambda() - kLambdaHarmonic) <= 1e-9);
  CHECK(std::abs(tf.energy() - 0.75 * kLambdaHarmonic) <= 1e-9);
  CHECK(std::abs(tf.interaction_integral() - kInteractionHarmonic) <= 1e-9);
  CHECK(tf.potential_integral() == doctest::Approx(std::pow(kLambdaHarmonic, 4) / 64.0).epsilon(1e-10));
  CHECK(tf.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tf.support_radius() == doctest::Approx(std::sqrt(kLambdaHarmonic)).epsilon(1e-12));
  CHECK(tf.max_lagrange_residual() <= 1e-8 * tf.lambda());

  const auto shifted = tf_solve(make_potential({}));
  CHECK(std::abs(shifted.lambda() - (1.0 + kLambdaHarmonic)) <= 1e-9);
  CHECK(shifted.interaction_integral() == doctest::Approx(kInteractionHarmonic).epsilon(1e-9));
}

TEST_CASE("quartic trap multiplier against a Beta-function oracle") {
  PotentialSpec spec;
  spec.kind = PotentialKind::PowerPlusOne;
  spec.exponent = 4.0;
  spec.offset = 0.0;
  // Mass = (1/(3 pi)) lambda^(9/4) B(3/4, 5/2).
  const double lambda = std::pow(3.0 * kPi / std::beta(0.75, 2.5), 4.0 / 9.0);
  const auto tf = tf_solve(make_potential(spec));
  CHECK(tf.lambda() == doctest::Approx(lambda).epsilon(1e-10));
  CHECK(tf.max_lagrange_residual() <= 1e-8 * tf.lambda());
}

TEST_CASE("support convention is exact") {
  for (const auto& v : {bare_harmonic(), make_potential({})}) {
    const auto tf = tf_solve(v);
    for (int i = 0; i <= 400; ++i) {
      const double r = 3.0 * i / 400.0;
      const double value = v.radial_value(r);
      const double rho = tf.density({r, 0, 0});
      if (value >= tf.lambda()) CHECK(rho == 0.0);
      if (rho == 0.0) CHECK(value >= tf.lambda());
      if (rho > 0.0) CHECK(std::abs(tf_inversion_constant() * std::pow(rho, 2.0 / 3.0) + value - tf.lambda()) <= 1e-8);
    }
    CHECK(tf.density_at_level(tf.lambda()) == 0.0);
  }
}

TEST_CASE("anisotropic traps go through the ray cubature") {
  PotentialSpec spec;
  spec.kind = PotentialKind::AnisotropicHarmonic;
  spec.offset = 0.0;
  spec.frequencies = {1.0, 2.0, 3.0};
  // The substitution y_i = w_i x_i divides the mass by w1 w2 w3 = 6, so lambda^3 / 144 = 1.
  const Tolerance tol{1e-10, 1e-8, 4000};
  const auto tf = tf_solve(make_potential(spec), tol);
  CHECK(tf.lambda() == doctest::Approx(std::cbrt(144.0)).epsilon(1e-6));
  CHECK(tf.energy() == doctest::Approx(0.75 * std::cbrt(144.0)).epsilon(1e-6));
}

TEST_CASE("normalization failure on a non-confining table") {
  PotentialSpec spec;
  spec.kind = PotentialKind::CustomRadial;
  spec.growth_exponent = 0.0;
  for (int i = 0; i < 16; ++i) {
    spec.table_radii.push_back(0.01 * i);
    spec.table_values.push_back(1.0 + 0.01 * i);
  }
  try {
    tf_solve(make_potential(spec));
    FAIL("expected a normalization failure");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("normalization failure") != std::string::npos);
  }
}

TEST_CASE("functional evaluation on trial densities") {
  const auto v = bare_harmonic();
  const auto tf = tf_solve(v);
  CHECK(tf_functional(v, tf.profile()) == doctest::Approx(tf.energy()).epsilon(1e-7));
  CHECK(tf_functional(v, [](double) { return 0.0; }, 2.0) == 0.0);

  // Dilation by two keeps the mass: rho_2(r) = rho(r/2) / 8.
  const double r0 = tf.support_radius();
  const double dilated =
      tf_functional(v, [&](double r) { return tf.density({r / 2.0, 0, 0}) / 8.0; }, 2.0 * r0);
  CHECK(dilated > tf.energy() + 0.1);

  std::vector<double> r(20), neg(20, 0.1);
  for (int i = 0; i < 20; ++i) r[i] = 0.1 * i;
  neg[4] = -1e-3;
  CHECK_THROWS_AS(tf_functional(v, RadialProfile(r, neg)), DomainError);
}

TEST_CASE("unit-mass trial densities never beat the minimizer") {
  const auto v = make_potential({});
  const auto tf = tf_solve(v);
  std::mt19937 gen(31337u);
  std::uniform_real_distribution<double> width(0.3, 4.0);
  std::uniform_real_distribution<double> power(0.2, 3.0);
  const Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    const double b = width(gen), q = power(gen);
    const ScalarFunction shape = [=](double r) { return std::pow(std::max(b - r * r, 0.0), q); };
    const double mass = integrate_radial(shape, std::sqrt(b), tol);
    const double e = tf_functional(v, [&](double r) { return shape(r) / mass; }, std::sqrt(b), tol);
    CHECK(e >= tf.energy() - 1e-9);
  }
}

TEST_CASE("phase-space occupations never beat the minimizer") {
  // m(x, p) = 2 theta 1{|p|^2 <= q(x)}: the momentum integral is done in closed form,
  // (2 pi)^-3 int m dp = theta q^(3/2) / (3 pi^2), (2 pi)^-3 int |p|^2 m dp = theta q^(5/2) / (5 pi^2).
  const auto v = bare_harmonic();
  const auto tf = tf_solve(v);
  std::mt19937 gen(4242u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double theta = 0.2 + 0.8 * u(gen);
    const double b = 0.5 + 4.0 * u(gen);
    const double tilt = 2.0 * u(gen);
    const ScalarFunction q0 = [=](double r) { return std::max(b - r * r - tilt * r * r * r * r, 0.0); };
    const double rb = std::sqrt(b);
    const double n0 = integrate_radial([&](double r) { return theta * std::pow(q0(r), 1.5) / (3 * kPi * kPi); }, rb, {});
    const double scale = std::pow(1.0 / n0, 2.0 / 3.0);  // q -> scale q normalizes the mass
    const double energy = integrate_radial(
        [&](double r) {
          const double q = scale * q0(r);
          return theta * (std::pow(q, 2.5) / (5 * kPi * kPi) + r * r * std::pow(q, 1.5) / (3 * kPi * kPi));
        },
        rb, {});
    CHECK(energy >= tf.energy() - 1e-9);
  }
}

TEST_CASE("two-spin minimization") {
  const auto tf = tf_solve(bare_harmonic());

  const auto free = two_spin_minimize(tf, 0.0);
  CHECK(free.energy == tf.energy());
  for (std::size_t i = 0; i < free.rho_up.size(); ++i) CHECK(free.rho_up[i] == free.rho_down[i]);

  const double g = 0.1;
  const auto s = two_spin_minimize(tf, g);
  CHECK(s.energy <= tf.energy() + 0.25 * g * kInteractionHarmonic + 1e-9);
  CHECK(s.energy > tf.energy());
  CHECK(s.symmetry_gap <= 1e-6);
  CHECK(s.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.iterations < 500);
  CHECK(s.residual_history.back() <= 1e-10);
  for (std::size_t i = 0; i < s.rho_up.size(); ++i) CHECK((s.rho_up[i] >= 0.0 && s.rho_down[i] >= 0.0));

  CHECK_THROWS_AS(two_spin_minimize(tf, -0.1), ConfigError);
  PotentialSpec aniso;
  aniso.kind = PotentialKind::AnisotropicHarmonic;
  CHECK_THROWS_AS(two_spin_minimize(make_potential(aniso), 0.1, {1e-9, 1e-7, 4000}), UnsupportedError);
}

TEST_CASE("momentum cutoff") {
  const auto v = bare_harmonic();
  const auto tf = tf_solve(v);
  const auto off = cutoff_tf_solve(tf, 1e3);
  CHECK(std::abs(off.energy - tf.energy()) <= 1e-6);
  CHECK(off.overflow_mass == 0.0);
  CHECK_FALSE(off.cutoff_active);

  for (double pf : {0.25, 0.5, 1.0, 1.5, 1.7, 2.0, 4.0}) {
    const auto c = cutoff_tf_solve(tf, pf);
    CHECK(c.energy <= tf.energy() + 1e-12);
    CHECK(c.overflow_mass >= 0.0);
    CHECK(c.overflow_mass <= 1.0);
  }

  // Active case against a direct radial evaluation: the multiplier sits at p_F^2 above min V = 0.
  const double pf = 1.0;
  const auto c = cutoff_tf_solve(tf, pf);
  CHECK(c.cutoff_active);
  const double k = tf_inversion_constant();
  const double cs = std::pow(2.0, -2.0 / 3.0) * tf_constant();
  auto rho = [&](double r) { return std::pow(std::max(pf * pf - r * r, 0.0) / k, 1.5); };
  const double mass = integrate_radial(rho, pf, {});
  const double regular =
      integrate_radial([&](double r) { return cs * std::pow(rho(r), 5.0 / 3.0) + r * r * rho(r); }, pf, {});
  CHECK(c.overflow_mass == doctest::Approx(1.0 - mass).epsilon(1e-10));
  CHECK(c.energy == doctest::Approx(regular + (1.0 - mass) * pf * pf).epsilon(1e-10));
  CHECK(c.energy < tf.energy());

  CHECK_THROWS_AS(cutoff_tf_solve(tf, 0.0), ConfigError);
}

TEST_CASE("mass-preserving bumps form a minimizing sequence") {
  const auto tf = tf_solve(make_potential({}));
  const std::vector<double> amps{1.0, 0.5, 0.25, 0.125, 0.0625};
  const auto steps = minimizing_sequence(tf, amps);
  REQUIRE(steps.size() == amps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CHECK(steps[i].energy >= tf.energy() - 1e-10);
    if (i > 0) {
      CHECK(steps[i].energy < steps[i - 1].energy);
      CHECK(steps[i].l53_distance < steps[i - 1].l53_distance);
      CHECK(steps[i - 1].l53_distance / steps[i].l53_distance == doctest::Approx(2.0).epsilon(1e-8));
      // The energy gap is quadratic in the amplitude.
      const double ratio = (steps[i - 1].energy - tf.energy()) / (steps[i].energy - tf.energy());
      CHECK(ratio > 3.0);
      CHECK(ratio < 5.0);
    }
  }
  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(minimizing_sequence(tf, bad), ConfigError);
}
