#include "khav/simd/batch_kernels.hpp"

#include <cmath>
#include <cstddef>

#include "khav/errors.hpp"
#include "khav/simd/dispatch.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace khav::simd {

namespace {

// x^{k/2} for integer k >= 0 splits into an integer power and an optional
// square root: ipow(x, k/2) for even k, ipow(x, (k-1)/2) * sqrt(x) for odd.
struct HalfPower {
  int ip;
  bool root;
};

constexpr HalfPower half_power(int k) { return {k / 2, (k % 2) != 0}; }

inline double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Scalar reference implementations
// ---------------------------------------------------------------------------

OracleSums oracle_accumulate_scalar(std::span<const double> z1,
                                    std::span<const double> z2,
                                    std::span<const double> w, int n,
                                    double rho, double ct, double st) {
  const HalfPower hp = half_power(n + 2);
  const double rho2 = rho * rho;
  const double c1 = -2.0 * rho * ct;
  const double c2 = n * (1.0 - rho2);
  OracleSums s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = 1.0 + rho2 - 2.0 * rho * z1[i];
    const double num = c1 * d - c2 * (rho * ct - (z1[i] * ct + z2[i] * st));
    double denom = ipow(d, hp.ip);
    if (hp.root) denom *= std::sqrt(d);
    const double f = std::abs(num) / denom;
    s.abs_sum += w[i] * f;
    s.sq_sum += w[i] * f * f;
  }
  return s;
}

void p_rho_integrand_scalar(std::span<const double> ws, std::span<double> out,
                            int n, double beta, double nz, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  const double q0 = n - beta;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const double w = ws[i];
    const double w2 = w * w;
    const double a = 1.0 + w2;
    const double b = 1.0 + kappa2 * w2;
    const double q = q0 + nz * w - beta * w2;
    double denom = ipow(a, ha.ip) * ipow(b, hb.ip);
    if (ha.root) denom *= std::sqrt(a * b);  // n odd: both roots at once
    out[i] = q * ipow(w, n - 2) / denom;
  }
}

void tangential_integrand_scalar(std::span<const double> ws,
                                 std::span<double> out, int n, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const double w = ws[i];
    const double w2 = w * w;
    const double a = 1.0 + w2;
    const double b = 1.0 + kappa2 * w2;
    double denom = ipow(a, ha.ip) * ipow(b, hb.ip);
    if (ha.root) denom *= std::sqrt(a * b);
    out[i] = ipow(w, n - 1) / denom;
  }
}

double poisson_weighted_sum_scalar(std::span<const double> coords,
                                   std::span<const double> weights,
                                   std::span<const double> signs,
                                   std::span<const double> y, int n) {
  const std::size_t count = weights.size();
  const HalfPower hp = half_power(n);
  double y2 = 0.0;
  for (int d = 0; d < n; ++d) y2 += y[d] * y[d];
  const double pref = 1.0 - y2;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double dist2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double diff = y[d] - coords[d * count + i];
      dist2 += diff * diff;
    }
    double denom = ipow(dist2, hp.ip);
    if (hp.root) denom *= std::sqrt(dist2);
    sum += weights[i] * signs[i] * pref / denom;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// AVX2 + FMA implementations (x86-64). Vector lanes are combined in a fixed
// order so results are run-to-run deterministic; they may differ from the
// scalar path by rounding only.
// ---------------------------------------------------------------------------
#if defined(__x86_64__) || defined(__i386__)

__attribute__((target("avx2,fma"))) inline __m256d ipow4(__m256d x, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  while (e > 0) {
    if (e & 1) r = _mm256_mul_pd(r, x);
    x = _mm256_mul_pd(x, x);
    e >>= 1;
  }
  return r;
}

__attribute__((target("avx2,fma"))) inline double hsum4(__m256d v) {
  // fixed combination order: (l0 + l1) + (l2 + l3)
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d pl = _mm_hadd_pd(lo, lo);
  __m128d ph = _mm_hadd_pd(hi, hi);
  return _mm_cvtsd_f64(pl) + _mm_cvtsd_f64(ph);
}

__attribute__((target("avx2,fma"))) OracleSums oracle_accumulate_avx2(
    std::span<const double> z1, std::span<const double> z2,
    std::span<const double> w, int n, double rho, double ct, double st) {
  const HalfPower hp = half_power(n + 2);
  const double rho2 = rho * rho;
  const __m256d vc1 = _mm256_set1_pd(-2.0 * rho * ct);
  const __m256d vc2 = _mm256_set1_pd(n * (1.0 - rho2));
  const __m256d vrct = _mm256_set1_pd(rho * ct);
  const __m256d vct = _mm256_set1_pd(ct);
  const __m256d vst = _mm256_set1_pd(st);
  const __m256d vone_rho2 = _mm256_set1_pd(1.0 + rho2);
  const __m256d vm2rho = _mm256_set1_pd(-2.0 * rho);
  const __m256d abs_mask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d vabs = _mm256_setzero_pd();
  __m256d vsq = _mm256_setzero_pd();
  const std::size_t count = w.size();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d vz1 = _mm256_loadu_pd(&z1[i]);
    const __m256d vz2 = _mm256_loadu_pd(&z2[i]);
    const __m256d vw = _mm256_loadu_pd(&w[i]);
    const __m256d d = _mm256_fmadd_pd(vm2rho, vz1, vone_rho2);
    __m256d proj = _mm256_mul_pd(vz1, vct);
    proj = _mm256_fmadd_pd(vz2, vst, proj);
    const __m256d inner = _mm256_sub_pd(vrct, proj);
    __m256d num = _mm256_mul_pd(vc1, d);
    num = _mm256_fnmadd_pd(vc2, inner, num);
    __m256d denom = ipow4(d, hp.ip);
    if (hp.root) denom = _mm256_mul_pd(denom, _mm256_sqrt_pd(d));
    const __m256d f =
        _mm256_div_pd(_mm256_and_pd(num, abs_mask), denom);
    vabs = _mm256_fmadd_pd(vw, f, vabs);
    vsq = _mm256_fmadd_pd(_mm256_mul_pd(vw, f), f, vsq);
  }
  OracleSums s;
  s.abs_sum = hsum4(vabs);
  s.sq_sum = hsum4(vsq);
  if (i < count) {
    OracleSums tail = oracle_accumulate_scalar(
        z1.subspan(i), z2.subspan(i), w.subspan(i), n, rho, ct, st);
    s.abs_sum += tail.abs_sum;
    s.sq_sum += tail.sq_sum;
  }
  return s;
}

__attribute__((target("avx2,fma"))) void p_rho_integrand_avx2(
    std::span<const double> ws, std::span<double> out, int n, double beta,
    double nz, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vq0 = _mm256_set1_pd(n - beta);
  const __m256d vnz = _mm256_set1_pd(nz);
  const __m256d vmb = _mm256_set1_pd(-beta);
  const __m256d vk2 = _mm256_set1_pd(kappa2);
  const std::size_t count = ws.size();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d w = _mm256_loadu_pd(&ws[i]);
    const __m256d w2 = _mm256_mul_pd(w, w);
    const __m256d a = _mm256_add_pd(vone, w2);
    const __m256d b = _mm256_fmadd_pd(vk2, w2, vone);
    __m256d q = _mm256_fmadd_pd(vnz, w, vq0);
    q = _mm256_fmadd_pd(vmb, w2, q);
    __m256d denom = _mm256_mul_pd(ipow4(a, ha.ip), ipow4(b, hb.ip));
    if (ha.root) {
      denom = _mm256_mul_pd(denom, _mm256_sqrt_pd(_mm256_mul_pd(a, b)));
    }
    const __m256d num = _mm256_mul_pd(q, ipow4(w, n - 2));
    _mm256_storeu_pd(&out[i], _mm256_div_pd(num, denom));
  }
  if (i < count) {
    p_rho_integrand_scalar(ws.subspan(i), out.subspan(i), n, beta, nz, kappa2);
  }
}

__attribute__((target("avx2,fma"))) void tangential_integrand_avx2(
    std::span<const double> ws, std::span<double> out, int n, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vk2 = _mm256_set1_pd(kappa2);
  const std::size_t count = ws.size();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d w = _mm256_loadu_pd(&ws[i]);
    const __m256d w2 = _mm256_mul_pd(w, w);
    const __m256d a = _mm256_add_pd(vone, w2);
    const __m256d b = _mm256_fmadd_pd(vk2, w2, vone);
    __m256d denom = _mm256_mul_pd(ipow4(a, ha.ip), ipow4(b, hb.ip));
    if (ha.root) {
      denom = _mm256_mul_pd(denom, _mm256_sqrt_pd(_mm256_mul_pd(a, b)));
    }
    _mm256_storeu_pd(&out[i], _mm256_div_pd(ipow4(w, n - 1), denom));
  }
  if (i < count) {
    tangential_integrand_scalar(ws.subspan(i), out.subspan(i), n, kappa2);
  }
}

__attribute__((target("avx2,fma"))) double poisson_weighted_sum_avx2(
    std::span<const double> coords, std::span<const double> weights,
    std::span<const double> signs, std::span<const double> y, int n) {
  const std::size_t count = weights.size();
  const HalfPower hp = half_power(n);
  double y2 = 0.0;
  for (int d = 0; d < n; ++d) y2 += y[d] * y[d];
  const __m256d vpref = _mm256_set1_pd(1.0 - y2);
  __m256d vsum = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d dist2 = _mm256_setzero_pd();
    for (int d = 0; d < n; ++d) {
      const __m256d vy = _mm256_set1_pd(y[d]);
      const __m256d vz = _mm256_loadu_pd(&coords[d * count + i]);
      const __m256d diff = _mm256_sub_pd(vy, vz);
      dist2 = _mm256_fmadd_pd(diff, diff, dist2);
    }
    __m256d denom = ipow4(dist2, hp.ip);
    if (hp.root) denom = _mm256_mul_pd(denom, _mm256_sqrt_pd(dist2));
    const __m256d vw = _mm256_mul_pd(_mm256_loadu_pd(&weights[i]),
                                     _mm256_loadu_pd(&signs[i]));
    vsum = _mm256_fmadd_pd(vw, _mm256_div_pd(vpref, denom), vsum);
  }
  double sum = hsum4(vsum);
  if (i < count) {
    // the scalar tail needs a column-major view with the original stride, so
    // fall back to indexing by hand
    const double pref = 1.0 - y2;
    for (; i < count; ++i) {
      double dist2 = 0.0;
      for (int d = 0; d < n; ++d) {
        const double diff = y[d] - coords[d * count + i];
        dist2 += diff * diff;
      }
      double denom = ipow(dist2, hp.ip);
      if (hp.root) denom *= std::sqrt(dist2);
      sum += weights[i] * signs[i] * pref / denom;
    }
  }
  return sum;
}

#endif  // x86

// ---------------------------------------------------------------------------
// NEON implementations (aarch64)
// ---------------------------------------------------------------------------
#if defined(__aarch64__)

inline float64x2_t ipow2(float64x2_t x, int e) {
  float64x2_t r = vdupq_n_f64(1.0);
  while (e > 0) {
    if (e & 1) r = vmulq_f64(r, x);
    x = vmulq_f64(x, x);
    e >>= 1;
  }
  return r;
}

OracleSums oracle_accumulate_neon(std::span<const double> z1,
                                  std::span<const double> z2,
                                  std::span<const double> w, int n, double rho,
                                  double ct, double st) {
  const HalfPower hp = half_power(n + 2);
  const double rho2 = rho * rho;
  const float64x2_t vc1 = vdupq_n_f64(-2.0 * rho * ct);
  const float64x2_t vc2 = vdupq_n_f64(n * (1.0 - rho2));
  const float64x2_t vrct = vdupq_n_f64(rho * ct);
  const float64x2_t vct = vdupq_n_f64(ct);
  const float64x2_t vst = vdupq_n_f64(st);
  const float64x2_t vone_rho2 = vdupq_n_f64(1.0 + rho2);
  const float64x2_t vm2rho = vdupq_n_f64(-2.0 * rho);
  float64x2_t vabs = vdupq_n_f64(0.0);
  float64x2_t vsq = vdupq_n_f64(0.0);
  const std::size_t count = w.size();
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const float64x2_t vz1 = vld1q_f64(&z1[i]);
    const float64x2_t vz2 = vld1q_f64(&z2[i]);
    const float64x2_t vw = vld1q_f64(&w[i]);
    const float64x2_t d = vfmaq_f64(vone_rho2, vm2rho, vz1);
    float64x2_t proj = vmulq_f64(vz1, vct);
    proj = vfmaq_f64(proj, vz2, vst);
    const float64x2_t inner = vsubq_f64(vrct, proj);
    float64x2_t num = vmulq_f64(vc1, d);
    num = vfmsq_f64(num, vc2, inner);
    float64x2_t denom = ipow2(d, hp.ip);
    if (hp.root) denom = vmulq_f64(denom, vsqrtq_f64(d));
    const float64x2_t f = vdivq_f64(vabsq_f64(num), denom);
    vabs = vfmaq_f64(vabs, vw, f);
    vsq = vfmaq_f64(vsq, vmulq_f64(vw, f), f);
  }
  OracleSums s;
  s.abs_sum = vgetq_lane_f64(vabs, 0) + vgetq_lane_f64(vabs, 1);
  s.sq_sum = vgetq_lane_f64(vsq, 0) + vgetq_lane_f64(vsq, 1);
  if (i < count) {
    OracleSums tail = oracle_accumulate_scalar(
        z1.subspan(i), z2.subspan(i), w.subspan(i), n, rho, ct, st);
    s.abs_sum += tail.abs_sum;
    s.sq_sum += tail.sq_sum;
  }
  return s;
}

void p_rho_integrand_neon(std::span<const double> ws, std::span<double> out,
                          int n, double beta, double nz, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  const float64x2_t vone = vdupq_n_f64(1.0);
  const float64x2_t vq0 = vdupq_n_f64(n - beta);
  const float64x2_t vnz = vdupq_n_f64(nz);
  const float64x2_t vmb = vdupq_n_f64(-beta);
  const float64x2_t vk2 = vdupq_n_f64(kappa2);
  const std::size_t count = ws.size();
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const float64x2_t w = vld1q_f64(&ws[i]);
    const float64x2_t w2 = vmulq_f64(w, w);
    const float64x2_t a = vaddq_f64(vone, w2);
    const float64x2_t b = vfmaq_f64(vone, vk2, w2);
    float64x2_t q = vfmaq_f64(vq0, vnz, w);
    q = vfmaq_f64(q, vmb, w2);
    float64x2_t denom = vmulq_f64(ipow2(a, ha.ip), ipow2(b, hb.ip));
    if (ha.root) denom = vmulq_f64(denom, vsqrtq_f64(vmulq_f64(a, b)));
    vst1q_f64(&out[i], vdivq_f64(vmulq_f64(q, ipow2(w, n - 2)), denom));
  }
  if (i < count) {
    p_rho_integrand_scalar(ws.subspan(i), out.subspan(i), n, beta, nz, kappa2);
  }
}

void tangential_integrand_neon(std::span<const double> ws,
                               std::span<double> out, int n, double kappa2) {
  const HalfPower ha = half_power(n + 2);
  const HalfPower hb = half_power(n - 2);
  const float64x2_t vone = vdupq_n_f64(1.0);
  const float64x2_t vk2 = vdupq_n_f64(kappa2);
  const std::size_t count = ws.size();
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const float64x2_t w = vld1q_f64(&ws[i]);
    const float64x2_t w2 = vmulq_f64(w, w);
    const float64x2_t a = vaddq_f64(vone, w2);
    const float64x2_t b = vfmaq_f64(vone, vk2, w2);
    float64x2_t denom = vmulq_f64(ipow2(a, ha.ip), ipow2(b, hb.ip));
    if (ha.root) denom = vmulq_f64(denom, vsqrtq_f64(vmulq_f64(a, b)));
    vst1q_f64(&out[i], vdivq_f64(ipow2(w, n - 1), denom));
  }
  if (i < count) {
    tangential_integrand_scalar(ws.subspan(i), out.subspan(i), n, kappa2);
  }
}

double poisson_weighted_sum_neon(std::span<const double> coords,
                                 std::span<const double> weights,
                                 std::span<const double> signs,
                                 std::span<const double> y, int n) {
  const std::size_t count = weights.size();
  const HalfPower hp = half_power(n);
  double y2 = 0.0;
  for (int d = 0; d < n; ++d) y2 += y[d] * y[d];
  const float64x2_t vpref = vdupq_n_f64(1.0 - y2);
  float64x2_t vsum = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    float64x2_t dist2 = vdupq_n_f64(0.0);
    for (int d = 0; d < n; ++d) {
      const float64x2_t vy = vdupq_n_f64(y[d]);
      const float64x2_t vz = vld1q_f64(&coords[d * count + i]);
      const float64x2_t diff = vsubq_f64(vy, vz);
      dist2 = vfmaq_f64(dist2, diff, diff);
    }
    float64x2_t denom = ipow2(dist2, hp.ip);
    if (hp.root) denom = vmulq_f64(denom, vsqrtq_f64(dist2));
    const float64x2_t vw =
        vmulq_f64(vld1q_f64(&weights[i]), vld1q_f64(&signs[i]));
    vsum = vfmaq_f64(vsum, vw, vdivq_f64(vpref, denom));
  }
  double sum = vgetq_lane_f64(vsum, 0) + vgetq_lane_f64(vsum, 1);
  const double pref = 1.0 - y2;
  for (; i < count; ++i) {
    double dist2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double diff = y[d] - coords[d * count + i];
      dist2 += diff * diff;
    }
    double denom = ipow(dist2, hp.ip);
    if (hp.root) denom *= std::sqrt(dist2);
    sum += weights[i] * signs[i] * pref / denom;
  }
  return sum;
}

#endif  // aarch64

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw domain_error(std::string(what) + ": size mismatch");
}

}  // namespace

OracleSums oracle_accumulate(std::span<const double> z1,
                             std::span<const double> z2,
                             std::span<const double> w, int n, double rho,
                             double cos_tau, double sin_tau) {
  check_sizes(z1.size(), w.size(), "oracle_accumulate");
  check_sizes(z2.size(), w.size(), "oracle_accumulate");
  if (!(rho < 1.0)) throw domain_error("oracle_accumulate: requires rho < 1");
  const Isa isa = active_isa();
#if defined(__x86_64__) || defined(__i386__)
  if (isa == Isa::avx2) {
    return oracle_accumulate_avx2(z1, z2, w, n, rho, cos_tau, sin_tau);
  }
#endif
#if defined(__aarch64__)
  if (isa == Isa::neon) {
    return oracle_accumulate_neon(z1, z2, w, n, rho, cos_tau, sin_tau);
  }
#endif
  (void)isa;
  return oracle_accumulate_scalar(z1, z2, w, n, rho, cos_tau, sin_tau);
}

void p_rho_integrand(std::span<const double> ws, std::span<double> out, int n,
                     double beta, double nz, double kappa2) {
  check_sizes(ws.size(), out.size(), "p_rho_integrand");
  const Isa isa = active_isa();
#if defined(__x86_64__) || defined(__i386__)
  if (isa == Isa::avx2) {
    p_rho_integrand_avx2(ws, out, n, beta, nz, kappa2);
    return;
  }
#endif
#if defined(__aarch64__)
  if (isa == Isa::neon) {
    p_rho_integrand_neon(ws, out, n, beta, nz, kappa2);
    return;
  }
#endif
  (void)isa;
  p_rho_integrand_scalar(ws, out, n, beta, nz, kappa2);
}

void tangential_integrand(std::span<const double> ws, std::span<double> out,
                          int n, double kappa2) {
  check_sizes(ws.size(), out.size(), "tangential_integrand");
  const Isa isa = active_isa();
#if defined(__x86_64__) || defined(__i386__)
  if (isa == Isa::avx2) {
    tangential_integrand_avx2(ws, out, n, kappa2);
    return;
  }
#endif
#if defined(__aarch64__)
  if (isa == Isa::neon) {
    tangential_integrand_neon(ws, out, n, kappa2);
    return;
  }
#endif
  (void)isa;
  tangential_integrand_scalar(ws, out, n, kappa2);
}

double poisson_weighted_sum(std::span<const double> coords,
                            std::span<const double> weights,
                            std::span<const double> signs,
                            std::span<const double> y, int n) {
  check_sizes(weights.size(), signs.size(), "poisson_weighted_sum");
  check_sizes(coords.size(), weights.size() * static_cast<std::size_t>(n),
              "poisson_weighted_sum");
  check_sizes(y.size(), static_cast<std::size_t>(n), "poisson_weighted_sum");
  const Isa isa = active_isa();
#if defined(__x86_64__) || defined(__i386__)
  if (isa == Isa::avx2) {
    return poisson_weighted_sum_avx2(coords, weights, signs, y, n);
  }
#endif
#if defined(__aarch64__)
  if (isa == Isa::neon) {
    return poisson_weighted_sum_neon(coords, weights, signs, y, n);
  }
#endif
  (void)isa;
  return poisson_weighted_sum_scalar(coords, weights, signs, y, n);
}

}  // namespace khav::simd
