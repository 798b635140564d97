#include "khav/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "khav/parallel.hpp"
#include "khav/special_functions.hpp"

namespace khav {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kSqrtPi = 1.7724538509055160273;

constexpr double kArgmaxBand = 1e-7;   // relative tie band around the maximum
constexpr double kAngleTol = 1e-3;     // argmax_tau threshold for the conjecture
constexpr double kValueRelTol = 1e-7;  // slack for "radial dominates"

// counter-indexed splitmix64 stream for reproducible random parameter draws
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t k) {
  const std::uint64_t bits = mix64(seed + (k + 1) * kGolden);
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double lerp_in(double lo, double hi, double u) { return lo + (hi - lo) * u; }

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

template <typename F>
GoldenResult golden_max(const F& f, double xl, double xh, double xtol) {
  constexpr double kInvPhi = 0.61803398874989485;
  double x1 = xh - kInvPhi * (xh - xl);
  double x2 = xl + kInvPhi * (xh - xl);
  double f1 = f(x1);
  double f2 = f(x2);
  while (xh - xl > xtol) {
    if (f1 < f2) {
      xl = x1;
      x1 = x2;
      f1 = f2;
      x2 = xl + kInvPhi * (xh - xl);
      f2 = f(x2);
    } else {
      xh = x2;
      x2 = x1;
      f2 = f1;
      x1 = xh - kInvPhi * (xh - xl);
      f1 = f(x1);
    }
  }
  return (f1 >= f2) ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

void finalize_identity(VerificationReport& rep) {
  rep.worst_residual = 0.0;
  rep.all_pass = true;
  for (const auto& p : rep.grid) {
    rep.worst_residual = std::max(rep.worst_residual, std::abs(p.residual));
    rep.all_pass = rep.all_pass && p.pass;
  }
}

void finalize_inequality(VerificationReport& rep) {
  rep.worst_residual = std::numeric_limits<double>::infinity();
  rep.all_pass = true;
  for (const auto& p : rep.grid) {
    rep.worst_residual = std::min(rep.worst_residual, p.residual);
    rep.all_pass = rep.all_pass && p.pass;
  }
  if (rep.grid.empty()) rep.worst_residual = 0.0;
}

}  // namespace

SweepResult sweep_tau(int n, double rho, int grid_size,
                      const QuadratureConfig& cfg) {
  if (grid_size < 2) throw domain_error("sweep_tau: grid_size must be >= 2");
  SweepResult out;
  out.samples.resize(grid_size);
  std::vector<double> taus(grid_size);
  for (int k = 0; k < grid_size; ++k) {
    taus[k] = kHalfPi * static_cast<double>(k) /
              static_cast<double>(grid_size - 1);
  }
  taus.back() = kHalfPi;
  parallel_for(static_cast<std::size_t>(grid_size), [&](std::size_t k) {
    const ProblemPoint pp(n, rho, taus[k]);
    out.samples[k] = {taus[k], c_final(pp, cfg).value};
  });
  out.radial_value = out.samples.front().value;
  out.tangential_value = out.samples.back().value;

  int best = 0;
  for (int k = 1; k < grid_size; ++k) {
    if (out.samples[k].value > out.samples[best].value) best = k;
  }
  const double lo = taus[std::max(0, best - 1)];
  const double hi = taus[std::min(grid_size - 1, best + 1)];
  const GoldenResult refined = golden_max(
      [&](double t) { return c_final(ProblemPoint(n, rho, t), cfg).value; },
      lo, hi, 1e-6);

  // candidates: every grid sample plus the refined point; among everything
  // within a relative tie band of the maximum, report the smallest angle
  double vmax = refined.value;
  for (const auto& s : out.samples) vmax = std::max(vmax, s.value);
  const double band = kArgmaxBand * std::max(1.0, std::abs(vmax));
  double arg = refined.x;
  if (refined.value < vmax - band) arg = std::numeric_limits<double>::max();
  for (const auto& s : out.samples) {
    if (s.value >= vmax - band) arg = std::min(arg, s.tau);
  }
  out.argmax_tau = arg;
  out.argmax_value = vmax;
  out.conjecture_holds =
      out.argmax_tau <= kAngleTol &&
      out.argmax_value <=
          out.radial_value +
              kValueRelTol * std::max(1.0, std::abs(out.radial_value));
  return out;
}

ConjectureScan conjecture_scan(int n, std::span<const double> rhos,
                               int grid_size, const QuadratureConfig& cfg) {
  if (rhos.empty()) throw domain_error("conjecture_scan: empty rho list");
  ConjectureScan scan;
  scan.rhos.assign(rhos.begin(), rhos.end());
  std::sort(scan.rhos.begin(), scan.rhos.end());
  scan.sweeps.reserve(scan.rhos.size());
  for (const double rho : scan.rhos) {
    scan.sweeps.push_back(sweep_tau(n, rho, grid_size, cfg));
  }
  scan.rho_star = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = scan.rhos.size(); k-- > 0;) {
    if (!scan.sweeps[k].conjecture_holds) break;
    scan.rho_star = scan.rhos[k];
  }
  return scan;
}

VerificationReport verify_zero_integral(int n, std::span<const double> rhos,
                                        std::span<const double> taus,
                                        const QuadratureConfig& cfg) {
  VerificationReport rep;
  rep.name = "zero_integral";
  for (const double rho : rhos) {
    for (const double tau : taus) {
      const ProblemPoint pp(n, rho, tau);
      const ZeroIntegralResult z = zero_integral_check(pp, cfg);
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)}, {"rho", rho}, {"tau", tau}};
      pt.residual = z.signed_value / z.abs_value;
      pt.pass = std::abs(pt.residual) <= 1e-9;
      rep.grid.push_back(std::move(pt));
    }
  }
  finalize_identity(rep);
  return rep;
}

VerificationReport verify_cross_methods(std::span<const int> ns,
                                        std::span<const double> rhos,
                                        std::span<const double> taus,
                                        double tol,
                                        const QuadratureConfig& cfg) {
  if (!(tol > 0.0)) throw domain_error("verify_cross_methods: tol must be > 0");
  VerificationReport rep;
  rep.name = "cross_methods";
  for (const int n : ns) {
    for (const double rho : rhos) {
      for (const double tau : taus) {
        const ProblemPoint pp(n, rho, tau);
        const double v_final = c_final(pp, cfg).value;
        const double v_d2 = c_double2(pp, cfg).value;
        double resid = std::abs(v_final - v_d2);
        if (rho < 1.0) {
          const double v_d1 = c_double1(pp, cfg).value;
          resid = std::max(resid, std::abs(v_d1 - v_final));
          resid = std::max(resid, std::abs(v_d1 - v_d2));
        }
        VerificationPoint pt;
        pt.params = {{"n", static_cast<double>(n)},
                     {"rho", rho},
                     {"tau", tau}};
        pt.residual = resid;
        pt.pass = resid <= tol;
        rep.grid.push_back(std::move(pt));

        if (n <= 3 && rho < 1.0) {
          const double v_mb = c_moebius(pp, cfg).value;
          VerificationPoint mb;
          mb.params = {{"n", static_cast<double>(n)},
                       {"rho", rho},
                       {"tau", tau},
                       {"moebius", 1.0}};
          mb.residual = std::abs(v_mb - v_final);
          mb.pass = mb.residual <= 10.0 * tol;
          rep.grid.push_back(std::move(mb));
        }
      }
    }
  }
  finalize_identity(rep);
  return rep;
}

VerificationReport verify_hypergeometric(std::uint64_t seed) {
  VerificationReport rep;
  rep.name = "hypergeometric";

  // 1) series vs integral representation on random admissible parameters
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(k);
    const double a = lerp_in(-2.5, 3.0, uniform01(seed, base));
    const double b = lerp_in(0.2, 3.0, uniform01(seed, base + 1));
    const double c = b + lerp_in(0.3, 3.5, uniform01(seed, base + 2));
    const double z = lerp_in(-0.85, 0.88, uniform01(seed, base + 3));
    const double s = hyp2f1(a, b, c, z, Hyp2f1Method::series);
    const double e = hyp2f1(a, b, c, z, Hyp2f1Method::euler_integral);
    VerificationPoint pt;
    pt.params = {{"a", a}, {"b", b}, {"c", c}, {"z", z}};
    pt.residual = std::abs(s - e) / std::max(1.0, std::abs(s));
    pt.pass = pt.residual <= 1e-9;
    rep.grid.push_back(std::move(pt));
  }

  // 2) quadratic argument transformation
  for (const double a : {-1.5, -0.4, 0.5, 1.2, 2.5}) {
    for (const double b : {0.3, 1.0, 1.7}) {
      for (const double z : {0.0, 0.15, 0.35, 0.55, 0.75, 0.9}) {
        const QuadraticTransformPair q = hyp2f1_quadratic_lhs_rhs(a, b, z);
        VerificationPoint pt;
        pt.params = {{"a", a}, {"b", b}, {"z", z}, {"transform", 1.0}};
        pt.residual =
            std::abs(q.lhs - q.rhs) / std::max(1.0, std::abs(q.lhs));
        pt.pass = pt.residual <= 1e-9;
        rep.grid.push_back(std::move(pt));
      }
    }
  }

  // 3) the two angular moment integrals agree with their common closed form
  //    and with their hypergeometric expressions
  for (const int n : {3, 4, 5, 6}) {
    for (const double rho : {0.25, 0.5, 0.75}) {
      const ProblemPoint pp = ProblemPoint::radial(n, rho);
      const double beta = pp.beta();
      const double closed = std::pow(2.0, n - 3) * beta *
                            gamma_fn(0.5 * (n - 1)) * gamma_fn(0.5 * (n - 1)) /
                            gamma_fn(n - 1.0);
      const QuadratureConfig cfg;
      const double j1 =
          n * integrate(
                  [&](double th) {
                    const double c = std::cos(th);
                    return c * c * kernel_s(th, rho, n);
                  },
                  0.0, kHalfPi, cfg)
                  .value;
      const double j2 =
          beta *
          integrate([&](double th) { return kernel_s(th, rho, n); }, 0.0,
                    kHalfPi, cfg)
              .value;
      const double rt = 4.0 * rho / ((1.0 + rho) * (1.0 + rho));
      const double pref = std::pow(2.0, n - 3) / std::pow(1.0 + rho, n - 2);
      const double j1_hyp = pref * n * gamma_fn(0.5 * (n - 1)) *
                            gamma_fn(0.5 * (n + 1)) / gamma_fn(n) *
                            hyp2f1(0.5 * n - 1.0, 0.5 * (n - 1), n, rt);
      const double j2_hyp = pref * beta * gamma_fn(0.5 * (n - 1)) *
                            gamma_fn(0.5 * (n - 1)) / gamma_fn(n - 1.0) *
                            hyp2f1(0.5 * n - 1.0, 0.5 * (n - 1), n - 1.0, rt);
      double resid = std::abs(j1 - closed);
      resid = std::max(resid, std::abs(j2 - closed));
      resid = std::max(resid, std::abs(j1_hyp - closed));
      resid = std::max(resid, std::abs(j2_hyp - closed));
      resid /= std::max(1.0, std::abs(closed));
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)}, {"rho", rho},
                   {"moments", 1.0}};
      pt.residual = resid;
      pt.pass = resid <= 1e-8;
      rep.grid.push_back(std::move(pt));
    }
  }

  finalize_identity(rep);
  return rep;
}

VerificationReport verify_km_inequality(int n_lo, int n_hi, double y_max,
                                        int grid_size) {
  if (n_lo < 3 || n_hi < n_lo) {
    throw domain_error("verify_km_inequality: requires 3 <= n_lo <= n_hi");
  }
  if (!(y_max > 0.0) || grid_size < 3) {
    throw domain_error("verify_km_inequality: bad grid");
  }
  VerificationReport rep;
  rep.name = "km_inequality";
  for (int n = n_lo; n <= n_hi; ++n) {
    const double nn = std::pow(static_cast<double>(n), n);
    for (int k = 0; k < grid_size; ++k) {
      const double y =
          -y_max + 2.0 * y_max * static_cast<double>(k) /
                       static_cast<double>(grid_size - 1);
      const double pl = p_script(y, n);
      const double pr = p_script(-y, n);
      const double lhs = pl * pl + pr * pr;
      const double rhs =
          (4.0 * (n - 1.0) * (3.0 * n - 2.0) * y * y + 2.0 * n * n) / nn;
      const double margin = rhs - lhs;
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)}, {"y", y}};
      pt.residual = margin;
      if (y == 0.0) {
        pt.pass = std::abs(margin) <= 1e-12;
      } else if (std::abs(y) >= 0.1) {
        pt.pass = margin > 1e-11;
      } else {
        pt.pass = margin >= -1e-12;
      }
      rep.grid.push_back(std::move(pt));
    }
  }
  finalize_inequality(rep);
  return rep;
}

VerificationReport verify_p1_inequality(int n_lo, int n_hi, double z_max,
                                        int grid_size) {
  if (n_lo < 3 || n_hi < n_lo) {
    throw domain_error("verify_p1_inequality: requires 3 <= n_lo <= n_hi");
  }
  if (!(z_max > 0.0) || grid_size < 3) {
    throw domain_error("verify_p1_inequality: bad grid");
  }
  VerificationReport rep;
  rep.name = "p1_inequality";
  for (int n = n_lo; n <= n_hi; ++n) {
    const double p0 = p1_closed(0.0, n);
    const double K = (3.0 * n - 2.0) / 4.0;
    for (int k = 0; k < grid_size; ++k) {
      const double z =
          -z_max + 2.0 * z_max * static_cast<double>(k) /
                       static_cast<double>(grid_size - 1);
      const double lhs = p1_closed(z, n) + p1_closed(-z, n);
      const double rhs = 2.0 * p0 * majorant_a(z, K, 1.0);
      const double margin = rhs - lhs;
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)}, {"z", z}};
      pt.residual = margin;
      if (z == 0.0) {
        pt.pass = std::abs(margin) <= 1e-12;
      } else if (std::abs(z) >= 0.1) {
        pt.pass = margin > 1e-11;
      } else {
        pt.pass = margin >= -1e-12;
      }
      rep.grid.push_back(std::move(pt));
    }
  }
  finalize_inequality(rep);
  return rep;
}

VerificationReport verify_ineq_rho(int n, double rho, double K, double z_max,
                                   int grid_size,
                                   const QuadratureConfig& cfg) {
  if (n < 3) throw domain_error("verify_ineq_rho: requires n >= 3");
  if (!(K > 0.0)) throw domain_error("verify_ineq_rho: requires K > 0");
  if (!(z_max > 0.0) || grid_size < 3) {
    throw domain_error("verify_ineq_rho: bad grid");
  }
  QuadratureConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  tight.abs_tol = std::min(cfg.abs_tol, 1e-14);
  const ProblemPoint pp = ProblemPoint::radial(n, rho);
  const double p0 = p_rho(0.0, pp, tight);
  VerificationReport rep;
  rep.name = "ineq_rho";
  for (int k = 0; k < grid_size; ++k) {
    const double z = -z_max + 2.0 * z_max * static_cast<double>(k) /
                                 static_cast<double>(grid_size - 1);
    const double f =
        (p_rho(z, pp, tight) + p_rho(-z, pp, tight)) / (2.0 * p0);
    const double margin = majorant_a(z, K, 1.0) - f;
    VerificationPoint pt;
    pt.params = {{"n", static_cast<double>(n)},
                 {"rho", rho},
                 {"K", K},
                 {"z", z}};
    pt.residual = margin;
    pt.pass = margin >= -1e-9;
    rep.grid.push_back(std::move(pt));
  }
  finalize_inequality(rep);
  return rep;
}

VerificationReport verify_extremal_lemma(int n, double a, double b,
                                         const QuadratureConfig& cfg) {
  if (n < 3) throw domain_error("verify_extremal_lemma: requires n >= 3");
  if (!(a >= 0.0) || !(b > 0.0)) {
    throw domain_error("verify_extremal_lemma: requires a >= 0 and b > 0");
  }
  VerificationReport rep;
  rep.name = "extremal_lemma";

  // weight normalization: integral of (1 - t^2)^{(n-4)/2}
  const double m0_closed =
      0.5 * kSqrtPi * gamma_fn(0.5 * (n - 2)) / gamma_fn(0.5 * (n - 1));
  const double m0 =
      integrate_t_weight([](double) { return 1.0; }, n, cfg).value;
  {
    VerificationPoint pt;
    pt.params = {{"n", static_cast<double>(n)}, {"check", 0.0}};
    pt.residual = std::abs(m0 - m0_closed) / std::max(1.0, m0_closed);
    pt.pass = pt.residual <= 1e-10;
    rep.grid.push_back(std::move(pt));
  }

  const double gammas[] = {0.0, 0.3, 0.8, 1.5, 3.0, 8.0};
  auto g_of = [&](double gamma) {
    return std::sqrt((a * gamma * gamma + b * (n - 1.0)) /
                     ((n - 1.0) * (1.0 + gamma * gamma)));
  };
  double g_prev = 0.0;
  const bool monotone_regime = a <= (n - 1.0) * b + 1e-12;
  for (std::size_t gi = 0; gi < std::size(gammas); ++gi) {
    const double gamma = gammas[gi];
    // quadratic integrand reduces to the two moments
    const double quad =
        integrate_t_weight(
            [&](double t) { return a * gamma * gamma * t * t + b; }, n, cfg)
            .value;
    const double closed =
        m0_closed * (a * gamma * gamma + b * (n - 1.0)) / (n - 1.0);
    {
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)},
                   {"gamma", gamma},
                   {"check", 1.0}};
      pt.residual = std::abs(quad - closed) / std::max(1.0, std::abs(closed));
      pt.pass = pt.residual <= 1e-10;
      rep.grid.push_back(std::move(pt));
    }
    // Cauchy-Schwarz comparison: the profile of the majorant is dominated by
    // m0 * g(gamma)
    const double lhs_cs =
        integrate_t_weight(
            [&](double t) { return majorant_a(gamma * t, a, b); }, n, cfg)
            .value /
        std::sqrt(1.0 + gamma * gamma);
    const double margin_cs = m0_closed * g_of(gamma) - lhs_cs;
    {
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)},
                   {"gamma", gamma},
                   {"check", 2.0}};
      pt.residual = std::max(0.0, -margin_cs);
      pt.pass = margin_cs >= -1e-12;
      rep.grid.push_back(std::move(pt));
    }
    // monotone decay of g when a/b <= n - 1
    if (gi > 0 && monotone_regime) {
      const double margin_mono = g_prev - g_of(gamma);
      VerificationPoint pt;
      pt.params = {{"n", static_cast<double>(n)},
                   {"gamma", gamma},
                   {"check", 3.0}};
      pt.residual = std::max(0.0, -margin_mono);
      pt.pass = margin_mono >= -1e-12;
      rep.grid.push_back(std::move(pt));
    }
    g_prev = g_of(gamma);
  }
  finalize_identity(rep);
  return rep;
}

double second_derivative_gap(int n, double rho, double K, double h,
                             const QuadratureConfig& cfg) {
  if (n < 3) throw domain_error("second_derivative_gap: requires n >= 3");
  if (!(h > 0.0)) throw domain_error("second_derivative_gap: requires h > 0");
  QuadratureConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  tight.abs_tol = std::min(cfg.abs_tol, 1e-14);
  const ProblemPoint pp = ProblemPoint::radial(n, rho);
  const double p0 = p_rho(0.0, pp, tight);
  auto F = [&](double z) {
    return (p_rho(z, pp, tight) + p_rho(-z, pp, tight)) / (2.0 * p0);
  };
  const double f0 = F(0.0);
  auto d2 = [&](double step) {
    return (F(step) - 2.0 * f0 + F(-step)) / (step * step);
  };
  const double coarse = d2(h);
  const double fine = d2(0.5 * h);
  const double f2 = (4.0 * fine - coarse) / 3.0;
  return K - f2;
}

}  // namespace khav
