#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "khav/errors.hpp"
#include "khav/simd/batch_kernels.hpp"
#include "khav/simd/dispatch.hpp"

using namespace khav;

namespace {

double unit_from(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<double>((z >> 11) + 1) * 0x1.0p-53;
}

bool try_force(simd::Isa isa) {
  try {
    simd::force_isa(isa);
    return true;
  } catch (const domain_error&) {
    return false;
  }
}

struct IsaRestore {
  simd::Isa saved = simd::active_isa();
  ~IsaRestore() { simd::force_isa(saved); }
};

std::vector<simd::Isa> vector_isas() {
  std::vector<simd::Isa> out;
  for (simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (try_force(isa)) out.push_back(isa);
  }
  return out;
}

}  // namespace

TEST_CASE("dispatch basics") {
  CHECK(std::string(simd::isa_name(simd::Isa::scalar)) == "scalar");
  const simd::Isa isa = simd::active_isa();
  CHECK((isa == simd::Isa::scalar || isa == simd::Isa::avx2 ||
         isa == simd::Isa::neon));
  IsaRestore restore;
  CHECK(try_force(simd::Isa::scalar));
  CHECK(simd::active_isa() == simd::Isa::scalar);
}

TEST_CASE("oracle accumulation: scalar matches a plain reference") {
  IsaRestore restore;
  REQUIRE(try_force(simd::Isa::scalar));

  const std::size_t count = 1003;
  std::vector<double> z1(count), z2(count), w(count);
  std::uint64_t st = 3;
  for (std::size_t i = 0; i < count; ++i) {
    const double phi = 2.0 * 3.14159265358979323846 * unit_from(st);
    z1[i] = std::cos(phi) * (2.0 * unit_from(st) - 1.0);
    z2[i] = std::sin(phi);
    w[i] = unit_from(st) / count;
  }
  const int n = 4;
  const double rho = 0.8, ct = std::cos(0.6), stau = std::sin(0.6);

  double ref_abs = 0.0, ref_sq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double D = 1.0 + rho * rho - 2.0 * rho * z1[i];
    const double num = -2.0 * rho * ct * D -
                       n * (1.0 - rho * rho) *
                           (rho * ct - (z1[i] * ct + z2[i] * stau));
    const double f = num / std::pow(D, 0.5 * (n + 2));
    ref_abs += w[i] * std::abs(f);
    ref_sq += w[i] * f * f;
  }

  const simd::OracleSums s = simd::oracle_accumulate(z1, z2, w, n, rho, ct,
                                                     stau);
  CHECK(s.abs_sum == doctest::Approx(ref_abs).epsilon(1e-12));
  CHECK(s.sq_sum == doctest::Approx(ref_sq).epsilon(1e-12));

  for (simd::Isa isa : vector_isas()) {
    REQUIRE(try_force(isa));
    const simd::OracleSums v = simd::oracle_accumulate(z1, z2, w, n, rho, ct,
                                                       stau);
    CHECK(v.abs_sum == doctest::Approx(s.abs_sum).epsilon(1e-11));
    CHECK(v.sq_sum == doctest::Approx(s.sq_sum).epsilon(1e-11));
  }

  std::vector<double> bad(count - 1);
  CHECK_THROWS_AS(simd::oracle_accumulate(z1, z2, bad, n, rho, ct, stau),
                  domain_error);
  CHECK_THROWS_AS(simd::oracle_accumulate(z1, z2, w, n, 1.0, ct, stau),
                  domain_error);
}

TEST_CASE("profile integrand batches: scalar vs reference vs vector") {
  IsaRestore restore;
  const std::size_t count = 517;
  std::vector<double> ws(count), out_scalar(count), out_vec(count);
  std::uint64_t st = 17;
  for (std::size_t i = 0; i < count; ++i) ws[i] = 6.0 * unit_from(st);

  for (int n : {3, 4, 5, 8}) {
    const double beta = 0.5 * (n - (n - 2) * 0.7);
    const double nz = n * 0.37;
    const double kappa = (1.0 - 0.7) / (1.0 + 0.7);
    const double k2 = kappa * kappa;

    REQUIRE(try_force(simd::Isa::scalar));
    simd::p_rho_integrand(ws, out_scalar, n, beta, nz, k2);
    for (std::size_t i = 0; i < count; i += 37) {
      const double w = ws[i];
      const double ref = ((n - beta) + nz * w - beta * w * w) *
                         std::pow(w, n - 2) /
                         (std::pow(1.0 + w * w, 0.5 * n + 1.0) *
                          std::pow(1.0 + k2 * w * w, 0.5 * n - 1.0));
      CHECK(out_scalar[i] == doctest::Approx(ref).epsilon(1e-12));
    }
    for (simd::Isa isa : vector_isas()) {
      REQUIRE(try_force(isa));
      simd::p_rho_integrand(ws, out_vec, n, beta, nz, k2);
      for (std::size_t i = 0; i < count; ++i) {
        CHECK(out_vec[i] == doctest::Approx(out_scalar[i]).epsilon(1e-11));
      }
    }

    REQUIRE(try_force(simd::Isa::scalar));
    simd::tangential_integrand(ws, out_scalar, n, k2);
    for (std::size_t i = 0; i < count; i += 41) {
      const double w = ws[i];
      const double ref = std::pow(w, n - 1) /
                         (std::pow(1.0 + w * w, 0.5 * n + 1.0) *
                          std::pow(1.0 + k2 * w * w, 0.5 * n - 1.0));
      CHECK(out_scalar[i] == doctest::Approx(ref).epsilon(1e-12));
    }
    for (simd::Isa isa : vector_isas()) {
      REQUIRE(try_force(isa));
      simd::tangential_integrand(ws, out_vec, n, k2);
      for (std::size_t i = 0; i < count; ++i) {
        CHECK(out_vec[i] == doctest::Approx(out_scalar[i]).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("weighted Poisson sums: scalar vs reference vs vector") {
  IsaRestore restore;
  const int n = 3;
  const std::size_t count = 771;
  std::vector<double> coords(n * count), weights(count), signs(count);
  std::uint64_t st = 29;
  for (std::size_t i = 0; i < count; ++i) {
    double norm = 0.0;
    double v[3];
    for (int d = 0; d < n; ++d) {
      v[d] = 2.0 * unit_from(st) - 1.0;
      norm += v[d] * v[d];
    }
    norm = std::max(std::sqrt(norm), 1e-9);
    for (int d = 0; d < n; ++d) coords[d * count + i] = v[d] / norm;
    weights[i] = 1.0 / count;
    signs[i] = (unit_from(st) < 0.5) ? -1.0 : 1.0;
  }
  const std::vector<double> y{0.21, -0.35, 0.4};

  REQUIRE(try_force(simd::Isa::scalar));
  const double s = simd::poisson_weighted_sum(coords, weights, signs, y, n);

  double ref = 0.0;
  double ny = 0.0;
  for (double v : y) ny += v * v;
  for (std::size_t i = 0; i < count; ++i) {
    double d2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double diff = y[d] - coords[d * count + i];
      d2 += diff * diff;
    }
    ref += weights[i] * signs[i] * (1.0 - ny) / std::pow(d2, 0.5 * n);
  }
  CHECK(s == doctest::Approx(ref).epsilon(1e-12));

  for (simd::Isa isa : vector_isas()) {
    REQUIRE(try_force(isa));
    const double v = simd::poisson_weighted_sum(coords, weights, signs, y, n);
    CHECK(v == doctest::Approx(s).epsilon(1e-11));
  }
}
