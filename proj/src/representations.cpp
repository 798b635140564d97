#include "khav/representations.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "khav/simd/batch_kernels.hpp"
#include "khav/special_functions.hpp"

namespace khav {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// omega_{n-2} / omega_n for the sphere-area normalizations appearing in the
// iterated representations; equals Gamma(n/2) / (pi Gamma((n-2)/2)).
double omega_ratio(int n) { return surface_area(n - 2) / surface_area(n); }

double cos_of(const ProblemPoint& pp) {
  return pp.is_tangential() ? 0.0 : std::cos(pp.tau());
}

double sin_of(const ProblemPoint& pp) {
  return pp.is_tangential() ? 1.0 : std::sin(pp.tau());
}

// integral of |A + B cos(phi)| sin^{n-3}(phi) over [0, pi], split exactly at
// the sign change of the linear factor when there is one.
QuadratureResult abs_cos_inner(double A, double B, int n,
                               const QuadratureConfig& cfg) {
  Integrand f = [A, B, n](double phi) {
    const double s = std::sin(phi);
    const double w = (n == 3) ? 1.0 : std::pow(s, n - 3);
    return std::abs(A + B * std::cos(phi)) * w;
  };
  double split = -1.0;
  if (B != 0.0 && std::abs(A) < std::abs(B)) split = std::acos(-A / B);
  if (split > 1e-14 && split < kPi - 1e-14) {
    const QuadratureResult r1 = integrate(f, 0.0, split, cfg);
    const QuadratureResult r2 = integrate(f, split, kPi, cfg);
    return {r1.value + r2.value, r1.err_est + r2.err_est};
  }
  return integrate(f, 0.0, kPi, cfg);
}

// integral over theta in [0, pi/2] of (c0 + r cos(2 theta - delta)) S(theta),
// optionally with the absolute value of the oscillating factor. For the
// absolute-value version the interval is split exactly at the roots of
// c0 + r cos(2 theta - delta).
QuadratureResult d2_inner(double c0, double r, double delta, double rho, int n,
                          bool take_abs, const QuadratureConfig& cfg) {
  Integrand f = [=](double th) {
    const double g = c0 + r * std::cos(2.0 * th - delta);
    return (take_abs ? std::abs(g) : g) * kernel_s(th, rho, n);
  };
  std::vector<double> pts{0.0, kHalfPi};
  if (take_abs && r > 1e-300 && std::abs(c0) < r) {
    const double psi = std::acos(std::clamp(-c0 / r, -1.0, 1.0));
    for (const double base : {0.5 * (delta + psi), 0.5 * (delta - psi)}) {
      for (const double shift : {-kPi, 0.0, kPi}) {
        const double t = base + shift;
        if (t > 1e-14 && t < kHalfPi - 1e-14) pts.push_back(t);
      }
    }
    std::sort(pts.begin(), pts.end());
  }
  QuadratureResult total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const QuadratureResult r_ = integrate(f, pts[i], pts[i + 1], cfg);
    total.value += r_.value;
    total.err_est += r_.err_est;
  }
  return total;
}

// integral of cos^m(phi) over [x, y] by the standard reduction
// m I_m = cos^{m-1}(y) sin(y) - cos^{m-1}(x) sin(x) + (m - 1) I_{m-2}.
double cos_power_integral(int m, double x, double y) {
  if (m == 0) return y - x;
  const double sy = std::sin(y), cy = std::cos(y);
  const double sx = std::sin(x), cx = std::cos(x);
  if (m == 1) return sy - sx;
  double even = y - x;      // I_0
  double odd = sy - sx;     // I_1
  for (int k = 2; k <= m; ++k) {
    double& prev = (k % 2 == 0) ? even : odd;
    prev = (std::pow(cy, k - 1) * sy - std::pow(cx, k - 1) * sx + (k - 1) * prev) / k;
  }
  return (m % 2 == 0) ? even : odd;
}

// signed integral of (a + c sin(phi)) cos^m(phi) over [x, y]
double linear_sine_integral(int m, double a, double c, double x, double y) {
  const double s = (std::pow(std::cos(x), m + 1) - std::pow(std::cos(y), m + 1)) /
                   (m + 1);
  return a * cos_power_integral(m, x, y) + c * s;
}

// integral of |a + c sin(phi)| cos^m(phi) over [-pi/2, pi/2], split exactly
// at the sign change of the linear factor when there is one.
double abs_linear_sine_integral(int m, double a, double c) {
  if (std::abs(a) >= std::abs(c) || c == 0.0) {
    return std::abs(linear_sine_integral(m, a, c, -kHalfPi, kHalfPi));
  }
  const double phi_star = std::asin(-a / c);
  return std::abs(linear_sine_integral(m, a, c, -kHalfPi, phi_star)) +
         std::abs(linear_sine_integral(m, a, c, phi_star, kHalfPi));
}

std::vector<double> extremal_signs(const ProblemPoint& pp,
                                   const SphereSamples& samples) {
  const int n = pp.n();
  const double rho = pp.rho();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  const auto z0 = samples.component(0);
  const auto z1 = samples.component(1);
  std::vector<double> signs(samples.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const double d = 1.0 + rho * rho - 2.0 * rho * z0[i];
    const double num = -2.0 * rho * ct * d -
                       n * (1.0 - rho * rho) *
                           (rho * ct - (z0[i] * ct + z1[i] * st));
    signs[i] = (num > 0.0) ? 1.0 : ((num < 0.0) ? -1.0 : 0.0);
  }
  return signs;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::sphere_oracle:
      return "oracle";
    case Method::moebius_sphere:
      return "moebius";
    case Method::double1:
      return "double1";
    case Method::double2:
      return "double2";
    case Method::final_1d:
      return "final";
  }
  return "unknown";
}

ConstantResult c_final(const ProblemPoint& pp, const QuadratureConfig& cfg) {
  const int n = pp.n();
  if (n < 3) throw domain_error("c_final: requires n >= 3");
  const double rho = pp.rho();
  const double scale = std::pow(2.0 / (1.0 + rho), n - 1);

  if (pp.is_tangential()) {
    const double kappa = pp.kappa();
    const double kappa2 = kappa * kappa;
    BatchIntegrand f = [n, kappa2](std::span<const double> ws,
                                   std::span<double> out) {
      simd::tangential_integrand(ws, out, n, kappa2);
    };
    const QuadratureResult r = integrate_halfline(f, cfg);
    const double pref = (2.0 * n / kPi) * scale;
    return {pref * r.value, pref * r.err_est};
  }

  if (pp.tau() == 0.0) {
    const QuadratureResult r = p_rho_result(0.0, pp, cfg);
    const double pref =
        4.0 * (surface_area(n - 1) / surface_area(n)) * scale;
    return {pref * r.value, pref * r.err_est};
  }

  const double gamma = pp.gamma();
  QuadratureConfig inner = cfg;
  inner.rel_tol = std::min(cfg.rel_tol, 1e-11);
  inner.abs_tol = std::min(cfg.abs_tol, 1e-13);
  Integrand g = [&pp, &inner, gamma](double t) {
    return p_rho(gamma * t, pp, inner) + p_rho(-gamma * t, pp, inner);
  };
  const QuadratureResult r = integrate_t_weight(g, n, cfg);
  const double pref =
      4.0 * omega_ratio(n) * scale / std::sqrt(1.0 + gamma * gamma);
  return {pref * r.value, pref * r.err_est};
}

ConstantResult c_double1(const ProblemPoint& pp, const QuadratureConfig& cfg) {
  const int n = pp.n();
  if (n < 3) throw domain_error("c_double1: requires n >= 3");
  const double rho = pp.rho();
  if (!(rho < 1.0)) {
    throw domain_error(
        "c_double1: requires rho < 1 (distance kernel is singular on the "
        "boundary)");
  }
  const double alpha = pp.alpha();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  Integrand outer = [&](double th) {
    const double a = 0.5 * n * (std::cos(th) - alpha) * ct;
    const double b = 0.5 * n * std::sin(th) * st;
    const double inner = abs_cos_inner(a, b, n, cfg).value;
    const double s = std::sin(th);
    const double sw = (n == 3) ? s : std::pow(s, n - 2);
    return kernel_r(th, rho, n) * sw * inner;
  };
  const QuadratureResult r = integrate(outer, 0.0, kPi, cfg);
  const double pref = 2.0 * omega_ratio(n) / (1.0 + rho);
  return {pref * r.value, pref * r.err_est};
}

ConstantResult c_double2(const ProblemPoint& pp, const QuadratureConfig& cfg) {
  const int n = pp.n();
  if (n < 3) throw domain_error("c_double2: requires n >= 3");
  const double rho = pp.rho();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  const double c0 = 0.5 * n * pp.alpha() * ct;
  Integrand outer = [&](double phi) {
    const double cp = std::cos(phi);
    const double r = 0.5 * n * std::sqrt(ct * ct + st * st * cp * cp);
    const double delta = std::atan2(st * cp, ct);
    const double inner = d2_inner(c0, r, delta, rho, n, true, cfg).value;
    const double s = std::sin(phi);
    const double sw = (n == 3) ? 1.0 : std::pow(s, n - 3);
    return sw * inner;
  };
  const QuadratureResult r = integrate(outer, 0.0, kPi, cfg);
  const double pref = 4.0 * omega_ratio(n) / (1.0 + rho);
  return {pref * r.value, pref * r.err_est};
}

ConstantResult c_moebius(const ProblemPoint& pp, const QuadratureConfig& cfg) {
  const int n = pp.n();
  const double rho = pp.rho();
  if (!(rho < 1.0)) throw domain_error("c_moebius: requires rho < 1");
  const double tau = pp.tau();

  if (n == 2) {
    Integrand f = [tau](double phi) { return std::abs(std::cos(phi - tau)); };
    std::vector<double> pts{0.0, kTwoPi};
    for (const double k : {tau + kHalfPi, tau + 3.0 * kHalfPi}) {
      if (k > 1e-14 && k < kTwoPi - 1e-14) pts.push_back(k);
    }
    std::sort(pts.begin(), pts.end());
    QuadratureResult total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const QuadratureResult r = integrate(f, pts[i], pts[i + 1], cfg);
      total.value += r.value;
      total.err_est += r.err_est;
    }
    const double pref = (2.0 / (1.0 + rho)) / kTwoPi;
    return {pref * total.value, pref * total.err_est};
  }

  if (n != 3) {
    throw domain_error(
        "c_moebius: iterated form implemented for n = 2 and n = 3; use "
        "c_moebius_mc for higher dimensions");
  }

  const double alpha = pp.alpha();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  Integrand outer = [&](double th) {
    const double a = (std::cos(th) - alpha) * ct;
    const double b = std::sin(th) * st;
    // azimuth integral over [0, 2 pi] is twice the [0, pi] integral
    const double inner = 2.0 * abs_cos_inner(a, b, 3, cfg).value;
    return std::sin(th) * kernel_r(th, rho, 3) * inner;
  };
  const QuadratureResult r = integrate(outer, 0.0, kPi, cfg);
  const double pref = (3.0 / (1.0 + rho)) / surface_area(3);
  return {pref * r.value, pref * r.err_est};
}

ConstantResult c_moebius_mc(const ProblemPoint& pp,
                            const SphereSamples& samples) {
  const int n = pp.n();
  if (samples.dim() != n) {
    throw domain_error("c_moebius_mc: sample dimension mismatch");
  }
  const double rho = pp.rho();
  if (!(rho < 1.0)) throw domain_error("c_moebius_mc: requires rho < 1");
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  const double shift = (n - 2.0) / n * rho;
  const auto z0 = samples.component(0);
  const auto z1 = samples.component(1);
  const auto w = samples.weights();
  double mean = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double dist2 = 1.0 - 2.0 * rho * z0[i] + rho * rho;
    const double dot = (z0[i] - shift) * ct + z1[i] * st;
    const double f = std::abs(dot) * std::pow(dist2, 0.5 * (2.0 - n));
    mean += w[i] * f;
    sq += w[i] * f * f;
  }
  const double pref = n / (1.0 + rho);
  double err = 0.0;
  if (samples.scheme() == SphereScheme::monte_carlo) {
    const double var = std::max(0.0, sq - mean * mean);
    err = pref * std::sqrt(var / static_cast<double>(samples.size()));
  }
  return {pref * mean, err};
}

ConstantResult c_sphere_oracle(const ProblemPoint& pp,
                               const SphereSamples& samples) {
  if (samples.dim() != pp.n()) {
    throw domain_error("c_sphere_oracle: sample dimension mismatch");
  }
  if (!(pp.rho() < 1.0)) {
    throw domain_error("c_sphere_oracle: requires rho < 1");
  }
  const simd::OracleSums sums = simd::oracle_accumulate(
      samples.component(0), samples.component(1), samples.weights(), pp.n(),
      pp.rho(), cos_of(pp), sin_of(pp));
  const double one_minus_rho = 1.0 - pp.rho();
  double err = 0.0;
  if (samples.scheme() == SphereScheme::monte_carlo) {
    const double var = std::max(0.0, sums.sq_sum - sums.abs_sum * sums.abs_sum);
    err = one_minus_rho *
          std::sqrt(var / static_cast<double>(samples.size()));
  }
  return {one_minus_rho * sums.abs_sum, err};
}

OracleMoments oracle_moments(const ProblemPoint& pp,
                             const QuadratureConfig& cfg) {
  const int n = pp.n();
  if (n < 3) throw domain_error("oracle_moments: requires n >= 3");
  if (!(pp.rho() < 1.0)) {
    throw domain_error("oracle_moments: requires rho < 1");
  }
  const double rho = pp.rho();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  const int m = n - 3;  // azimuthal weight is cos^m(phi)
  const double full_m = cos_power_integral(m, -kHalfPi, kHalfPi);
  // integral of sin^2(phi) cos^m(phi) over the same range
  const double full_m_sin2 = full_m / (m + 2);

  // Reduce to <zeta, e1> = cos(theta), <zeta, e2> = sin(theta) sin(phi); the
  // remaining n - 3 coordinates integrate to the azimuthal weight above. In
  // these variables |x - zeta|^2 = (1 - rho)^2 + 4 rho sin^2(theta / 2) and
  // the integrand is |a + c sin(phi)| / D^{(n+2)/2} with a, c as below.
  auto pieces = [&](double th, double& dist, double& a, double& c,
                    double& weight) {
    const double half = std::sin(0.5 * th);
    dist = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * half * half;
    const double cth = std::cos(th), sth = std::sin(th);
    a = -2.0 * rho * ct * dist - n * (1.0 - rho * rho) * (rho - cth) * ct;
    c = n * (1.0 - rho * rho) * st * sth;
    weight = (n == 3) ? sth : std::pow(sth, n - 2);
  };

  Integrand mean_f = [&](double th) {
    double dist, a, c, weight;
    pieces(th, dist, a, c, weight);
    return weight * abs_linear_sine_integral(m, a, c) /
           std::pow(dist, 0.5 * (n + 2));
  };
  Integrand second_f = [&](double th) {
    double dist, a, c, weight;
    pieces(th, dist, a, c, weight);
    return weight * (full_m * a * a + full_m_sin2 * c * c) /
           std::pow(dist, static_cast<double>(n + 2));
  };

  // Split off the boundary layer theta ~ 1 - rho so every piece gets an
  // accurate whole-interval estimate (the reference for the relative panel
  // budgets); without the split the first estimate can undershoot by orders
  // of magnitude and the budgets sink below the rounding noise of the peak.
  std::vector<double> cuts{0.0};
  if (1.0 - rho < 0.2) {
    for (double t = 8.0 * (1.0 - rho); t < 0.4 * kPi; t *= 8.0) {
      cuts.push_back(t);
    }
  }
  cuts.push_back(kPi);

  OracleMoments out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out.mean += integrate(mean_f, cuts[i], cuts[i + 1], cfg).value;
    out.second += integrate(second_f, cuts[i], cuts[i + 1], cfg).value;
  }
  const double norm = omega_ratio(n);  // normalizes the reduced density
  out.mean *= norm;
  out.second *= norm;
  return out;
}

ConstantResult c_halfspace(int n, double tau, const QuadratureConfig& cfg) {
  if (n < 3) throw domain_error("c_halfspace: requires n >= 3");
  if (!(tau >= 0.0 && tau <= kHalfPi + 1e-12)) {
    throw domain_error("c_halfspace: requires tau in [0, pi/2]");
  }
  if (std::abs(tau - kHalfPi) <= 1e-12) return {2.0 / kPi, 0.0};
  const double gamma = std::tan(tau);
  Integrand g = [n, gamma](double t) {
    return p1_closed(gamma * t, n) + p1_closed(-gamma * t, n);
  };
  const QuadratureResult r = integrate_t_weight(g, n, cfg);
  const double pref = 4.0 * omega_ratio(n) / std::sqrt(1.0 + gamma * gamma);
  const double value = pref * r.value;
  if (tau == 0.0) {
    // the radial value also has a closed form; use it as a self-check
    const double closed = 4.0 * (surface_area(n - 1) / surface_area(n)) *
                          std::pow(n - 1.0, 0.5 * (n - 1)) /
                          std::pow(static_cast<double>(n), 0.5 * n);
    if (std::abs(value - closed) > 1e-10 * std::max(1.0, std::abs(closed))) {
      throw accuracy_error(
          "c_halfspace: radial quadrature disagrees with the closed form",
          value, std::abs(value - closed));
    }
  }
  return {value, pref * r.err_est};
}

double c_zero(int n) {
  if (n < 2) throw domain_error("c_zero: requires n >= 2");
  return 2.0 * surface_area(n + 1) / surface_area(n + 2);
}

double global_bound(int n, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw domain_error("global_bound: requires rho in [0, 1)");
  }
  return c_zero(n) / (1.0 - rho);
}

ZeroIntegralResult zero_integral_check(const ProblemPoint& pp,
                                       const QuadratureConfig& cfg) {
  const int n = pp.n();
  if (n < 3) throw domain_error("zero_integral_check: requires n >= 3");
  const double rho = pp.rho();
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  const double c0 = 0.5 * n * pp.alpha() * ct;
  auto outer_of = [&](bool take_abs) {
    Integrand outer = [&, take_abs](double phi) {
      const double cp = std::cos(phi);
      const double r = 0.5 * n * std::sqrt(ct * ct + st * st * cp * cp);
      const double delta = std::atan2(st * cp, ct);
      const double inner = d2_inner(c0, r, delta, rho, n, take_abs, cfg).value;
      const double s = std::sin(phi);
      const double sw = (n == 3) ? 1.0 : std::pow(s, n - 3);
      return sw * inner;
    };
    return integrate(outer, 0.0, kPi, cfg);
  };
  ZeroIntegralResult out;
  out.signed_value = outer_of(false).value;
  out.abs_value = outer_of(true).value;
  return out;
}

double extremal_derivative(const ProblemPoint& pp, double h,
                           const SphereSamples& samples) {
  const int n = pp.n();
  if (samples.dim() != n) {
    throw domain_error("extremal_derivative: sample dimension mismatch");
  }
  if (!(h > 0.0)) throw domain_error("extremal_derivative: requires h > 0");
  if (!(pp.rho() + h < 1.0)) {
    throw domain_error("extremal_derivative: requires rho + h < 1");
  }
  const std::vector<double> signs = extremal_signs(pp, samples);
  const double ct = cos_of(pp);
  const double st = sin_of(pp);
  std::vector<double> yp(n, 0.0), ym(n, 0.0);
  yp[0] = pp.rho() + h * ct;
  yp[1] = h * st;
  ym[0] = pp.rho() - h * ct;
  ym[1] = -h * st;
  const double up = simd::poisson_weighted_sum(
      samples.coords(), samples.weights(), signs, yp, n);
  const double um = simd::poisson_weighted_sum(
      samples.coords(), samples.weights(), signs, ym, n);
  return (up - um) / (2.0 * h);
}

double extremal_extension_value(const ProblemPoint& pp,
                                const SphereSamples& samples,
                                std::span<const double> y) {
  const int n = pp.n();
  if (samples.dim() != n) {
    throw domain_error("extremal_extension_value: sample dimension mismatch");
  }
  if (y.size() != static_cast<std::size_t>(n)) {
    throw domain_error("extremal_extension_value: y has wrong dimension");
  }
  double y2 = 0.0;
  for (const double c : y) y2 += c * c;
  if (!(y2 < 1.0)) {
    throw domain_error("extremal_extension_value: y must be interior");
  }
  const std::vector<double> signs = extremal_signs(pp, samples);
  return simd::poisson_weighted_sum(samples.coords(), samples.weights(),
                                    signs, y, n);
}

}  // namespace khav
