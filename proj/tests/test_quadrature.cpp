#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <span>

#include "khav/errors.hpp"
#include "khav/quadrature.hpp"
#include "khav/sphere_sampling.hpp"

using namespace khav;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive integration of smooth functions") {
  QuadratureConfig cfg;
  auto r1 = integrate([](double x) { return x * x; }, 0.0, 1.0, cfg);
  CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r1.err_est < 1e-12);

  auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, kPi, cfg);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-13));

  auto r3 = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, cfg);
  CHECK(r3.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration locates interior kinks") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return std::abs(std::cos(x)); }, 0.0,
                     2.0 * kPi, cfg);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("degenerate and invalid intervals") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return x; }, 2.0, 2.0, cfg);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0, cfg),
                  domain_error);
}

TEST_CASE("config validation") {
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad),
                  domain_error);
  QuadratureConfig bad2;
  bad2.panel_order = 1;
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad2),
                  domain_error);
  QuadratureConfig bad3;
  bad3.max_depth = 0;
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad3),
                  domain_error);
}

TEST_CASE("depth exhaustion raises accuracy_error with a partial value") {
  QuadratureConfig cfg;
  cfg.max_depth = 3;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 1e-300;
  try {
    (void)integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                    cfg);
    FAIL("expected accuracy_error");
  } catch (const accuracy_error& e) {
    CHECK(e.partial_value() > 1.0);
    CHECK(e.partial_value() < 3.0);
    CHECK(e.err_est() > 0.0);
  }
}

TEST_CASE("batch and scalar drivers take identical panel decisions") {
  QuadratureConfig cfg;
  auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  auto scalar = integrate(f, 0.0, 1.0, cfg);
  BatchIntegrand bf = [](std::span<const double> xs, std::span<double> ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ys[i] = 1.0 / (1.0 + xs[i] * xs[i]);
    }
  };
  auto batch = integrate(bf, 0.0, 1.0, cfg);
  CHECK(scalar.value == batch.value);  // bitwise: same evaluation order
  CHECK(scalar.value == doctest::Approx(kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("integration is deterministic") {
  QuadratureConfig cfg;
  auto f = [](double x) { return std::abs(std::sin(3.0 * x) - 0.4); };
  auto a = integrate(f, 0.0, 2.0, cfg);
  auto b = integrate(f, 0.0, 2.0, cfg);
  CHECK(a.value == b.value);
  CHECK(a.err_est == b.err_est);
}

TEST_CASE("algebraic endpoint weight (1 - t^2)^{(n-4)/2}") {
  QuadratureConfig cfg;
  // n = 4: weight 1.
  auto r4 = integrate_t_weight([](double) { return 1.0; }, 4, cfg);
  CHECK(r4.value == doctest::Approx(1.0).epsilon(1e-13));
  // n = 3: integral of (1 - t^2)^{-1/2} = pi/2; integrable endpoint blowup.
  auto r3 = integrate_t_weight([](double) { return 1.0; }, 3, cfg);
  CHECK(r3.value == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  // n = 5: integral of sqrt(1 - t^2) = pi/4.
  auto r5 = integrate_t_weight([](double) { return 1.0; }, 5, cfg);
  CHECK(r5.value == doctest::Approx(kPi / 4.0).epsilon(1e-13));
  // n = 3 with t^2: integral t^2 / sqrt(1 - t^2) = pi/4.
  auto rt = integrate_t_weight([](double t) { return t * t; }, 3, cfg);
  CHECK(rt.value == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_t_weight([](double) { return 1.0; }, 2, cfg),
                  domain_error);
}

TEST_CASE("half-line integration") {
  QuadratureConfig cfg;
  auto r1 = integrate_halfline([](double w) { return std::exp(-w); }, cfg);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-12));

  auto r2 = integrate_halfline(
      [](double w) { return w * w / std::pow(1.0 + w * w, 2.5); }, cfg);
  CHECK(r2.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto r3 = integrate_halfline(
      [](double w) { return w * w * w / std::pow(1.0 + w * w, 3.0); }, cfg);
  CHECK(r3.value == doctest::Approx(0.25).epsilon(1e-12));

  auto r4 = integrate_halfline([](double w) { return 1.0 / (1.0 + w * w); },
                               cfg);
  CHECK(r4.value == doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("half-line batch overload matches the scalar overload") {
  QuadratureConfig cfg;
  auto scalar = integrate_halfline(
      [](double w) { return w * w / std::pow(1.0 + w * w, 2.5); }, cfg);
  BatchIntegrand bf = [](std::span<const double> ws, std::span<double> ys) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
      ys[i] = ws[i] * ws[i] / std::pow(1.0 + ws[i] * ws[i], 2.5);
    }
  };
  auto batch = integrate_halfline(bf, cfg);
  CHECK(scalar.value == batch.value);
}

TEST_CASE("sphere sampling: weights, moments, and the four-sigma property") {
  // Grid rules: positive weights summing to one, unit points, exact second
  // moments (E zeta_1^2 = 1/n on the sphere in R^n).
  for (int n : {2, 3}) {
    const SphereSamples grid(n, 4096, SphereScheme::latlong_grid);
    double wsum = 0.0, z2 = 0.0;
    const auto w = grid.weights();
    const auto z = grid.component(0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(w[i] > 0.0);
      wsum += w[i];
      z2 += w[i] * z[i] * z[i];
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z2 == doctest::Approx(1.0 / n).epsilon(n == 2 ? 1e-10 : 1e-8));
    double max_norm_dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double s = 0.0;
      for (int d = 0; d < n; ++d) {
        const double c = grid.component(d)[i];
        s += c * c;
      }
      max_norm_dev = std::max(max_norm_dev, std::abs(std::sqrt(s) - 1.0));
    }
    CHECK(max_norm_dev <= 1e-14);
  }

  // Seeded Monte Carlo: the symmetric first moment vanishes within three
  // standard errors at a million points.
  const SphereSamples mc1(3, 1000000, SphereScheme::monte_carlo, 1);
  double mean_z = 0.0;
  for (const double z : mc1.component(0)) mean_z += z;
  mean_z /= static_cast<double>(mc1.size());
  CHECK(std::abs(mean_z) <= 3e-3);

  // A bounded integrand estimated by Monte Carlo lands within four sample
  // standard errors of the deterministic grid value for at least 19 of 20
  // seeds (n = 3, one million points each).
  const SphereSamples grid3(3, 4096, SphereScheme::latlong_grid);
  double grid_val = 0.0;
  {
    const auto w = grid3.weights();
    const auto z = grid3.component(0);
    for (std::size_t i = 0; i < grid3.size(); ++i) {
      grid_val += w[i] * std::abs(z[i]);
    }
  }
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SphereSamples mc(3, 1000000, SphereScheme::monte_carlo, seed);
    const auto z = mc.component(0);
    double s1 = 0.0, s2 = 0.0;
    for (const double zi : z) {
      s1 += std::abs(zi);
      s2 += zi * zi;
    }
    const double inv_n = 1.0 / static_cast<double>(mc.size());
    const double mean = s1 * inv_n;
    const double sigma =
        std::sqrt(std::max(0.0, s2 * inv_n - mean * mean) * inv_n);
    if (std::abs(mean - grid_val) <= 4.0 * sigma) ++hits;
  }
  CHECK(hits >= 19);
}
