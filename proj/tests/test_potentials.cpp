#include <cmath>

#include "doctest.h"
#include "fermigas/potentials.hpp"

using namespace fermigas;

namespace {

PotentialSpec power_spec(double s) {
  PotentialSpec spec;
  spec.kind = PotentialKind::PowerPlusOne;
  spec.exponent = s;
  return spec;
}

// Halton points in the ball of radius r, independent of the library's own sampler.
std::vector<Vec3> ball_points(double radius, int count) {
  auto halton = [](int i, int b) {
    double f = 1.0, x = 0.0;
    while (i > 0) {
      f /= b;
      x += f * (i % b);
      i /= b;
    }
    return x;
  };
  std::vector<Vec3> out;
  for (int i = 1; out.size() < static_cast<std::size_t>(count); ++i) {
    Vec3 p{(2 * halton(i, 2) - 1) * radius, (2 * halton(i, 3) - 1) * radius, (2 * halton(i, 5) - 1) * radius};
    if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= radius * radius) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("built-in potential families") {
  const auto harmonic = make_potential({});
  CHECK(harmonic({0, 0, 0}) == 1.0);
  CHECK(harmonic({1, 2, 2}) == doctest::Approx(10.0));
  CHECK(harmonic.is_radial());
  CHECK(harmonic.confining());
  CHECK(kind_name(harmonic.spec().kind) == "harmonic_plus_one");

  const auto quartic = make_potential(power_spec(4.0));
  CHECK(quartic({1, 0, 0}) == doctest::Approx(2.0));
  CHECK(quartic({0, 0.6, 0.8}) == doctest::Approx(2.0));
  CHECK(quartic.growth_exponent() == 4.0);

  CHECK_THROWS_AS(make_potential(power_spec(0.5)), ConfigError);
  CHECK_THROWS_AS(make_potential(power_spec(1.0)), ConfigError);
  PotentialSpec negative;
  negative.offset = -1.0;
  CHECK_THROWS_AS(make_potential(negative), ConfigError);
}

TEST_CASE("built-ins stay above one on sampled points") {
  for (double s : {1.5, 2.0, 3.0, 6.0}) {
    const auto v = make_potential(power_spec(s));
    for (const auto& x : ball_points(20.0, 500)) CHECK(v(x) >= 1.0);
  }
  PotentialSpec aniso;
  aniso.kind = PotentialKind::AnisotropicHarmonic;
  aniso.frequencies = {0.5, 1.0, 3.0};
  const auto v = make_potential(aniso);
  CHECK_FALSE(v.is_radial());
  for (const auto& x : ball_points(20.0, 500)) CHECK(v(x) >= 1.0);
}

TEST_CASE("power traps grow like |x|^s") {
  for (double s : {1.2, 2.0, 3.5, 8.0}) {
    const auto v = make_potential(power_spec(s));
    const double r = 1e3;
    CHECK(std::abs(v({r, 0, 0}) / std::pow(r, s) - 1.0) <= 0.01);
  }
}

TEST_CASE("H1 constants of the harmonic trap") {
  const auto rep = h1_diagnostic(make_potential({}), 10.0, 64);
  CHECK(rep.laplacian_constant == doctest::Approx(6.0));
  CHECK(rep.grad_laplacian_constant == 0.0);
  CHECK(rep.hessian_constant == doctest::Approx(12.0));
  CHECK(rep.pass);
  CHECK(rep.normalized);
  CHECK(rep.min_value == 1.0);
  CHECK(rep.points == 1 + 320 * 64);
}

TEST_CASE("H1 constants grow with the sampled radius") {
  for (double s : {2.0, 3.0, 4.0}) {
    const auto v = make_potential(power_spec(s));
    double prev_c1 = 0.0, prev_c2 = 0.0, prev_c3 = 0.0;
    for (double radius : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto rep = h1_diagnostic(v, radius, 32);
      CHECK(rep.laplacian_constant >= prev_c1);
      CHECK(rep.grad_laplacian_constant >= prev_c2);
      CHECK(rep.hessian_constant >= prev_c3);
      CHECK(rep.pass);
      prev_c1 = rep.laplacian_constant;
      prev_c2 = rep.grad_laplacian_constant;
      prev_c3 = rep.hessian_constant;
    }
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (double s : {3.0, 4.5}) {
    const auto v = make_potential(power_spec(s));
    const Vec3 x{0.7, -0.4, 1.1};
    const double h = 1e-3;
    double lap = 0.0, hess = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        auto shifted = [&](double dj, double dk) {
          Vec3 y = x;
          y[j] += dj;
          y[k] += dk;
          return v(y);
        };
        const double d = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
        hess += d * d;
        if (j == k) lap += d;
      }
    }
    const auto d = v.derivatives(x);
    CHECK(d.laplacian == doctest::Approx(lap).epsilon(1e-5));
    CHECK(d.hessian_frobenius_sq == doctest::Approx(hess).epsilon(1e-5));

    auto lap_at = [&](const Vec3& y) { return v.derivatives(y).laplacian; };
    Vec3 grad{};
    for (int j = 0; j < 3; ++j) {
      Vec3 a = x, b = x;
      a[j] += h;
      b[j] -= h;
      grad[j] = (lap_at(a) - lap_at(b)) / (2 * h);
    }
    CHECK(d.grad_laplacian_norm ==
          doctest::Approx(std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2])).epsilon(1e-5));
    CHECK(v.gradient_norm(x) == doctest::Approx(s * std::pow(std::sqrt(0.49 + 0.16 + 1.21), s - 1)).epsilon(1e-12));
  }
}

TEST_CASE("custom tables") {
  PotentialSpec spec;
  spec.kind = PotentialKind::CustomRadial;
  for (int i = 0; i < 65; ++i) {
    const double r = 4.0 * i / 64;
    spec.table_radii.push_back(r);
    spec.table_values.push_back(1.0 + r * r);
  }
  const auto v = make_potential(spec);
  CHECK(v.radial_value(1.3) == doctest::Approx(1.0 + 1.69).epsilon(1e-3));
  CHECK(v.sublevel_radius(5.0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(v.sublevel_radius(17.0 * 4.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_THROWS_AS(h1_diagnostic(v, 2.0, 8), UnsupportedError);
  CHECK_THROWS_AS(v.gradient_norm({1, 0, 0}), UnsupportedError);

  auto flat = spec;
  flat.growth_exponent = 0.0;
  const auto f = make_potential(flat);
  CHECK_FALSE(f.confining());
  CHECK_THROWS_AS(f.sublevel_radius(100.0), DomainError);

  auto shifted = spec;
  shifted.table_radii[0] = 0.1;
  CHECK_THROWS_AS(make_potential(shifted), ConfigError);
  auto low = spec;
  low.table_values[3] = 0.5;
  CHECK_THROWS_AS(make_potential(low), ConfigError);
}

TEST_CASE("sublevel integrals against closed forms") {
  PotentialSpec bare;
  bare.offset = 0.0;
  const auto v = make_potential(bare);
  const double level = 2.0;
  const double volume = sublevel_integral(v, level, [](double) { return 1.0; }, {});
  CHECK(volume == doctest::Approx(4.0 * kPi / 3.0 * std::pow(level, 1.5)).epsilon(1e-12));
  CHECK(sublevel_integral(v, -1.0, [](double) { return 1.0; }, {}) == 0.0);

  // Over an ellipsoid the substitution y_i = w_i x_i reduces to the ball: int (L - |y|^2)^(3/2) = pi^2 L^3 / 8.
  PotentialSpec aniso = bare;
  aniso.kind = PotentialKind::AnisotropicHarmonic;
  aniso.frequencies = {1.0, 2.0, 3.0};
  const auto e = make_potential(aniso);
  const double value = sublevel_integral(e, level, [&](double x) { return std::pow(level - x, 1.5); }, {1e-10, 1e-8, 4000});
  CHECK(value == doctest::Approx(kPi * kPi * std::pow(level, 3) / 8.0 / 6.0).epsilon(1e-6));
}
