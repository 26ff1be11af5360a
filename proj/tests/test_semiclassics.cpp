#include <cmath>

#include "doctest.h"
#include "fermigas/semiclassics.hpp"
#include "fermigas/thomas_fermi.hpp"

using namespace fermigas;

namespace {

Potential harmonic(double offset) {
  PotentialSpec spec;
  spec.offset = offset;
  return make_potential(spec);
}

// Plateau at V = 2 for 1 <= r <= 3 between two quadratic pieces.
Potential plateau_trap() {
  PotentialSpec spec;
  spec.kind = PotentialKind::CustomRadial;
  for (int i = 0; i <= 80; ++i) {
    const double r = 0.05 * i;
    spec.table_radii.push_back(r);
    spec.table_values.push_back(r <= 1.0 ? 1.0 + r * r : (r <= 3.0 ? 2.0 : 2.0 + (r - 3.0) * (r - 3.0)));
  }
  return make_potential(spec);
}

}  // namespace

TEST_CASE("phase-space counts of the harmonic trap") {
  const auto bare = phase_space_counts(harmonic(0.0), 2.0);
  CHECK(bare.n_cl == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(bare.e_cl == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(bare.e_tilde == doctest::Approx(0.25 - 2.0 / 6.0).epsilon(1e-10));

  const auto empty = phase_space_counts(harmonic(1.0), 0.5);
  CHECK(empty.n_cl == 0.0);
  CHECK(empty.e_cl == 0.0);

  for (double level : {1.5, 2.0, 4.0, 9.0}) {
    const double g = level - 1.0;
    const auto b = phase_space_counts(harmonic(1.0), level);
    CHECK(b.n_cl == doctest::Approx(g * g * g / 48.0).epsilon(1e-10));
    CHECK(b.e_cl == doctest::Approx(g * g * g * g / 64.0 + g * g * g / 48.0).epsilon(1e-10));
    CHECK(b.e_tilde <= 0.0);
  }
}

TEST_CASE("non-radial counts scale with the frequencies") {
  PotentialSpec spec;
  spec.kind = PotentialKind::AnisotropicHarmonic;
  spec.offset = 0.0;
  spec.frequencies = {0.5, 1.0, 2.5};
  const auto b = phase_space_counts(make_potential(spec), 3.0, {1e-11, 1e-9, 4000});
  CHECK(b.n_cl == doctest::Approx(27.0 / 48.0 / 1.25).epsilon(1e-8));
  CHECK(b.e_cl == doctest::Approx(81.0 / 64.0 / 1.25).epsilon(1e-8));
}

TEST_CASE("non-confining traps are rejected") {
  PotentialSpec spec;
  spec.kind = PotentialKind::CustomRadial;
  spec.growth_exponent = 0.0;
  for (int i = 0; i < 16; ++i) {
    spec.table_radii.push_back(0.1 * i);
    spec.table_values.push_back(1.0 + 0.1 * i);
  }
  CHECK_THROWS_AS(phase_space_counts(make_potential(spec), 5.0), DomainError);
}

TEST_CASE("filling levels") {
  const auto v = harmonic(0.0);
  CHECK(lambda_for_filling(v, 1.0) == doctest::Approx(std::cbrt(48.0)).epsilon(1e-10));
  CHECK(lambda_for_filling(v, 1.0 / 6.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(lambda_for_filling(v, 0.0), ConfigError);

  // Two spins at the TF multiplier hold unit mass.
  for (double offset : {0.0, 1.0}) {
    const auto tf = tf_solve(harmonic(offset));
    CHECK(2.0 * phase_space_counts(tf.potential(), tf.lambda()).n_cl == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(lambda_for_filling(tf.potential(), 0.5) == doctest::Approx(tf.lambda()).epsilon(1e-9));
  }
}

TEST_CASE("Legendre relation on a level grid") {
  const auto v = harmonic(1.0);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(1.5 + 0.2 * i);
  for (const auto& p : legendre_check(v, grid)) CHECK(p.residual <= 1e-3 * p.level * std::abs(p.dn_dlevel));
}

TEST_CASE("shifted energy is the minimum over occupations") {
  const auto v = harmonic(1.0);
  std::vector<PhaseSpaceBudget> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(phase_space_counts(v, 1.0 + 0.3 * i));
  for (const auto& at : grid)
    for (const auto& other : grid) CHECK(at.e_tilde <= other.e_cl - at.level * other.n_cl + 1e-10);
}

TEST_CASE("H2 probe") {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(1.0 + 0.1 * i);
  const auto smooth = h2_probe(harmonic(0.0), grid);
  CHECK(smooth.smoothness_score <= 0.02);
  CHECK(smooth.smoothness_score > 0.0);
  CHECK_FALSE(smooth.flagged);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    CHECK(smooth.derivative[i] == doctest::Approx(grid[i] * grid[i] / 16.0 + 0.01 / 48.0).epsilon(1e-8));

  std::vector<double> around;
  for (int i = 0; i <= 30; ++i) around.push_back(1.5 + 0.05 * i);
  const auto plateau = h2_probe(plateau_trap(), around);
  CHECK(plateau.flagged);

  std::vector<double> below{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto none = h2_probe(harmonic(1.0), below);
  for (double d : none.derivative) CHECK(d == 0.0);
  CHECK_FALSE(none.flagged);
  CHECK(none.points_above_minimum == 0);

  CHECK_THROWS_AS(h2_probe(harmonic(1.0), {1.0, 0.5, 2.0}), ConfigError);
}
