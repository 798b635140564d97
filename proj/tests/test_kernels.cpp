#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "khav/errors.hpp"
#include "khav/kernels.hpp"
#include "khav/sphere_sampling.hpp"

using namespace khav;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Tiny deterministic generator for test points.
double unit_from(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<double>((z >> 11) + 1) * 0x1.0p-53;
}
}  // namespace

TEST_CASE("problem point validation and derived parameters") {
  CHECK_THROWS_AS(ProblemPoint(1, 0.5, 0.0), domain_error);
  CHECK_THROWS_AS(ProblemPoint(3, -0.1, 0.0), domain_error);
  CHECK_THROWS_AS(ProblemPoint(3, 1.1, 0.0), domain_error);
  CHECK_THROWS_AS(ProblemPoint(3, 0.5, -0.1), domain_error);
  CHECK_THROWS_AS(ProblemPoint(3, 0.5, kPi / 2.0 + 1e-6), domain_error);

  const ProblemPoint pp(3, 0.5, 0.3);
  CHECK(pp.alpha() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(pp.beta() == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(pp.kappa() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(pp.w_radial() == doctest::Approx(std::sqrt(1.4)).epsilon(1e-15));
  CHECK(pp.gamma() == doctest::Approx(std::tan(0.3)).epsilon(1e-15));
  CHECK_FALSE(pp.is_tangential());

  const ProblemPoint tang = ProblemPoint::tangential(4, 0.7);
  CHECK(tang.is_tangential());
  CHECK_THROWS_AS(tang.gamma(), domain_error);

  const ProblemPoint rad = ProblemPoint::radial(4, 0.7);
  CHECK(rad.tau() == 0.0);
}

TEST_CASE("parameter identities hold across the ball") {
  for (int n = 2; n <= 8; ++n) {
    for (double rho : {0.0, 0.2, 0.5, 0.8, 0.99, 1.0}) {
      const ProblemPoint pp(n, rho, 0.0);
      const double a = pp.alpha();
      const double b = pp.beta();
      const double w = pp.w_radial();
      CHECK(b == doctest::Approx(0.5 * n * (1.0 - a)).epsilon(1e-14));
      CHECK(w * w == doctest::Approx((n - b) / b).epsilon(1e-14));
      CHECK(n - b == doctest::Approx(b * w * w).epsilon(1e-14));
      CHECK(kernel_z(0.0, rho, n) == doctest::Approx(w).epsilon(1e-14));
    }
  }
}

TEST_CASE("canonicalize reduces (x, ell) to (n, rho, tau)") {
  const std::vector<double> x{0.3, 0.0, 0.4};
  const std::vector<double> ey{0.0, 1.0, 0.0};
  const ProblemPoint pp = canonicalize(x, ey);
  CHECK(pp.n() == 3);
  CHECK(pp.rho() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pp.is_tangential());

  const std::vector<double> origin{0.0, 0.0, 0.0};
  CHECK(canonicalize(origin, ey).tau() == 0.0);

  // ell and -ell give the same angle.
  const std::vector<double> ell{0.6, 0.0, 0.8};
  const std::vector<double> mell{-0.6, 0.0, -0.8};
  CHECK(canonicalize(x, ell).tau() ==
        doctest::Approx(canonicalize(x, mell).tau()).epsilon(1e-14));

  const std::vector<double> big{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(canonicalize(big, ey), domain_error);
  const std::vector<double> nonunit{0.0, 0.5, 0.0};
  CHECK_THROWS_AS(canonicalize(x, nonunit), domain_error);
  const std::vector<double> short_ell{1.0, 0.0};
  CHECK_THROWS_AS(canonicalize(x, short_ell), domain_error);
}

TEST_CASE("Poisson kernel point values and normalization") {
  const std::vector<double> x{0.5, 0.0, 0.0};
  const std::vector<double> zp{1.0, 0.0, 0.0};
  const std::vector<double> zm{-1.0, 0.0, 0.0};
  CHECK(poisson(x, zp, 3) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(poisson(x, zm, 3) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  // Mean of P(x, .) over the sphere is 1.
  const SphereSamples grid(3, 4096, SphereScheme::latlong_grid);
  std::array<double, 3> pt{};
  double mean = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, pt);
    mean += grid.weights()[i] * poisson({x.data(), 3}, {pt.data(), 3}, 3);
  }
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Poisson gradient: closed values and finite differences") {
  const std::vector<double> x{0.5, 0.0, 0.0};
  const std::vector<double> z{1.0, 0.0, 0.0};
  std::array<double, 3> g{};
  poisson_gradient(x, z, 3, g);
  CHECK(g[0] == doctest::Approx(28.0).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-13));

  // At the center the gradient is n * zeta.
  const std::vector<double> origin{0.0, 0.0, 0.0};
  const std::vector<double> zeta{0.6, -0.8, 0.0};
  poisson_gradient(origin, zeta, 3, g);
  for (int d = 0; d < 3; ++d) {
    CHECK(g[d] == doctest::Approx(3.0 * zeta[d]).epsilon(1e-13));
  }

  // Central differences at a generic interior point.
  std::uint64_t st = 7;
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> xx(3), zz(3);
    double nx = 0.0, nz = 0.0;
    for (int d = 0; d < 3; ++d) {
      xx[d] = unit_from(st) - 0.5;
      zz[d] = unit_from(st) - 0.5;
      nx += xx[d] * xx[d];
      nz += zz[d] * zz[d];
    }
    for (int d = 0; d < 3; ++d) {
      xx[d] *= 0.8 / std::sqrt(std::max(nx, 1e-12));
      zz[d] /= std::sqrt(std::max(nz, 1e-12));
    }
    poisson_gradient(xx, zz, 3, g);
    const double h = 1e-6;
    for (int d = 0; d < 3; ++d) {
      std::vector<double> xp = xx, xm = xx;
      xp[d] += h;
      xm[d] -= h;
      const double fd = (poisson(xp, zz, 3) - poisson(xm, zz, 3)) / (2.0 * h);
      CHECK(g[d] == doctest::Approx(fd).epsilon(5e-7));
    }
  }
}

TEST_CASE("Moebius reflection preserves the sphere and is an involution") {
  std::uint64_t st = 42;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(3), zeta(3);
    double nx = 0.0, nz = 0.0;
    for (int d = 0; d < 3; ++d) {
      x[d] = unit_from(st) - 0.5;
      zeta[d] = unit_from(st) - 0.5;
      nx += x[d] * x[d];
      nz += zeta[d] * zeta[d];
    }
    for (int d = 0; d < 3; ++d) {
      x[d] *= 0.9 / std::sqrt(std::max(nx, 1e-12));
      zeta[d] /= std::sqrt(std::max(nz, 1e-12));
    }
    std::array<double, 3> eta{}, back{};
    moebius_reflect(x, zeta, eta);
    double neta = 0.0;
    for (double v : eta) neta += v * v;
    CHECK(std::sqrt(neta) == doctest::Approx(1.0).epsilon(1e-12));
    moebius_reflect(x, {eta.data(), 3}, back);
    for (int d = 0; d < 3; ++d) {
      CHECK(back[d] == doctest::Approx(zeta[d]).epsilon(1e-11));
    }
  }
}

TEST_CASE("distance kernel R") {
  // theta = pi/2, rho = 0.5, n = 3: base = (1-rho)^2 + 4 rho sin^2(pi/4).
  const double base = 0.25 + 4.0 * 0.5 * 0.5;
  CHECK(kernel_r(kPi / 2.0, 0.5, 3) ==
        doctest::Approx(std::pow(base, -0.5)).epsilon(1e-14));
  CHECK(kernel_r(0.0, 0.5, 3) ==
        doctest::Approx(std::pow(0.25, -0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_r(0.0, 1.0, 3), domain_error);
}

TEST_CASE("angular weight S") {
  // kappa = 0 collapses S to sin^{n-2}.
  CHECK(kernel_s(kPi / 4.0, 1.0, 3) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(kernel_s(kPi / 2.0, 1.0, 3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kernel_s(kPi / 2.0, 1.0, 6) == doctest::Approx(1.0).epsilon(1e-14));
  // Generic point against the textbook expression (n = 4, safe regime).
  const double rho = 0.5, th = 0.7;
  const double kap = (1.0 - rho) / (1.0 + rho);
  const double c = std::cos(th), s = std::sin(th);
  const double direct = std::pow(2.0 / (1.0 + rho), 2.0) * s * s * c * c /
                        (c * c + kap * kap * s * s);
  CHECK(kernel_s(th, rho, 4) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("upper limit Z and the quadratic Q") {
  // rho = 1, n = 3: Z(1) = (3 + sqrt(17)) / 2.
  CHECK(kernel_z(1.0, 1.0, 3) ==
        doctest::Approx(0.5 * (3.0 + std::sqrt(17.0))).epsilon(1e-14));
  // Z stays positive and finite far into the stable branch.
  const double zneg = kernel_z(-50.0, 0.7, 4);
  CHECK(zneg > 0.0);
  CHECK(zneg < 1.0);
  // Q(Z(z), z) = 0.
  for (int n : {3, 4, 5, 7}) {
    for (double rho : {0.0, 0.4, 0.9, 1.0}) {
      for (double z : {-30.0, -2.0, -0.3, 0.0, 0.5, 4.0, 25.0}) {
        const ProblemPoint pp(n, rho, 0.0);
        const double w = kernel_z(z, rho, n);
        const double scale =
            (n - pp.beta()) + std::abs(n * z) * w + pp.beta() * w * w;
        CHECK(std::abs(kernel_q(w, z, n, rho)) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("profile integral P_rho and its closed forms") {
  QuadratureConfig cfg;
  // At rho = 1 the quadrature reduces to the closed form.
  for (int n : {3, 4, 6}) {
    for (double z : {-1.0, -0.4, 0.0, 0.5, 1.0, 3.0}) {
      const ProblemPoint pp(n, 1.0, 0.0);
      CHECK(p_rho(z, pp, cfg) ==
            doctest::Approx(p1_closed(z, n)).epsilon(1e-10));
    }
  }
  // Frozen closed-form values.
  CHECK(p1_closed(0.0, 3) ==
        doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(p1_closed(1.0, 3) ==
        doctest::Approx(1.1429850280746372).epsilon(1e-13));
  CHECK(p1_closed(0.35, 4) ==
        doctest::Approx(0.5575088001448788).epsilon(1e-13));
  // At rho = 0 and z = 0 the weight integrates in closed form:
  // P_0(0) = n * integral_0^1 w^{n-2}(1-w^2)/(1+w^2)^{n/2+1} ... = n/(2^n(n-1))
  // checked here numerically for a couple of n.
  for (int n : {3, 4, 5}) {
    const ProblemPoint pp(n, 0.0, 0.0);
    CHECK(p_rho(0.0, pp, cfg) ==
          doctest::Approx(n / (std::pow(2.0, n) * (n - 1.0))).epsilon(1e-10));
  }
}

TEST_CASE("normalized profile P and its identities") {
  CHECK(p_script(0.2, 6) ==
        doctest::Approx(0.037914520022619524).epsilon(1e-13));
  for (int n : {3, 4, 5, 8}) {
    // P(0)^2 = n^{2-n}.
    const double p0 = p_script(0.0, n);
    CHECK(p0 * p0 == doctest::Approx(std::pow(n, 2.0 - n)).epsilon(1e-12));
    // P(y) P(-y) = (4(n-1) y^2 + n^2)^{1 - n/2}.
    for (double y : {0.3, 1.0, 7.0, 30.0}) {
      const double prod = p_script(y, n) * p_script(-y, n);
      const double closed =
          std::pow(4.0 * (n - 1.0) * y * y + n * n, 1.0 - 0.5 * n);
      CHECK(prod == doctest::Approx(closed).epsilon(1e-12));
    }
    // Large negative arguments stay finite and positive.
    CHECK(p_script(-30.0, n) > 0.0);
    CHECK(std::isfinite(p_script(-30.0, n)));
  }
}

TEST_CASE("closed profile scales to the normalized one") {
  for (int n : {3, 4, 5, 7}) {
    const double pref = std::pow(n - 1.0, 0.5 * (n - 1)) / n;
    for (double z : {-2.0, -0.7, 0.0, 0.4, 1.3, 6.0}) {
      const double lhs = p1_closed(z, n);
      const double rhs =
          pref * p_script(n * z / (2.0 * std::sqrt(n - 1.0)), n);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("majorant") {
  CHECK(majorant_a(2.0, 1.75, 1.0) == doctest::Approx(std::sqrt(8.0)));
  CHECK(majorant_a(0.0, 1.75, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(majorant_a(1.0, -0.1, 1.0), domain_error);
  CHECK_THROWS_AS(majorant_a(1.0, 1.0, 0.0), domain_error);
}
