#include "khav/kernels.hpp"

#include <cmath>

#include "khav/simd/batch_kernels.hpp"

namespace khav {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kTangentialEps = 1e-12;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

}  // namespace

ProblemPoint::ProblemPoint(int n, double rho, double tau) : n_(n), rho_(rho) {
  if (n < 2) throw domain_error("ProblemPoint: requires n >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw domain_error("ProblemPoint: requires rho in [0, 1]");
  }
  if (!(tau >= 0.0 && tau <= kHalfPi + kTangentialEps)) {
    throw domain_error("ProblemPoint: requires tau in [0, pi/2]");
  }
  tangential_ = std::abs(tau - kHalfPi) <= kTangentialEps;
  tau_ = tangential_ ? kHalfPi : tau;
}

ProblemPoint ProblemPoint::tangential(int n, double rho) {
  return ProblemPoint(n, rho, kHalfPi);
}

double ProblemPoint::alpha() const { return (n_ - 2) * rho_ / n_; }

double ProblemPoint::beta() const { return 0.5 * (n_ - (n_ - 2) * rho_); }

double ProblemPoint::kappa() const { return (1.0 - rho_) / (1.0 + rho_); }

double ProblemPoint::w_radial() const {
  return std::sqrt((n_ + (n_ - 2) * rho_) / (n_ - (n_ - 2) * rho_));
}

double ProblemPoint::gamma() const {
  if (tangential_) {
    throw domain_error("ProblemPoint: gamma is undefined at tau = pi/2");
  }
  return std::tan(tau_);
}

ProblemPoint canonicalize(std::span<const double> x,
                          std::span<const double> ell) {
  if (x.size() != ell.size()) {
    throw domain_error("canonicalize: x and ell must have the same dimension");
  }
  const int n = static_cast<int>(x.size());
  if (n < 2) throw domain_error("canonicalize: requires dimension >= 2");
  const double ell_norm = std::sqrt(norm2(ell));
  if (std::abs(ell_norm - 1.0) > 1e-10) {
    throw domain_error("canonicalize: ell must be a unit vector");
  }
  const double rho = std::sqrt(norm2(x));
  if (!(rho < 1.0)) {
    throw domain_error("canonicalize: x must lie inside the unit ball");
  }
  double tau = 0.0;
  if (rho > 0.0) {
    double dot = 0.0;
    for (int d = 0; d < n; ++d) dot += x[d] * ell[d];
    double c = std::abs(dot) / (rho * ell_norm);
    if (c > 1.0) c = 1.0;
    tau = std::acos(c);
  }
  return ProblemPoint(n, rho, tau);
}

double poisson(std::span<const double> x, std::span<const double> zeta,
               int n) {
  double dist2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double diff = x[d] - zeta[d];
    dist2 += diff * diff;
  }
  if (dist2 == 0.0) throw domain_error("poisson: x == zeta is singular");
  return (1.0 - norm2(x)) / std::pow(dist2, 0.5 * n);
}

void poisson_gradient(std::span<const double> x, std::span<const double> zeta,
                      int n, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(n)) {
    throw domain_error("poisson_gradient: output span has wrong size");
  }
  double dist2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double diff = x[d] - zeta[d];
    dist2 += diff * diff;
  }
  if (dist2 == 0.0) {
    throw domain_error("poisson_gradient: x == zeta is singular");
  }
  const double x2 = norm2(x);
  const double scale = std::pow(dist2, -0.5 * (n + 2));
  for (int d = 0; d < n; ++d) {
    out[d] =
        scale * (-2.0 * x[d] * dist2 - n * (1.0 - x2) * (x[d] - zeta[d]));
  }
}

void moebius_reflect(std::span<const double> x, std::span<const double> zeta,
                     std::span<double> out) {
  if (x.size() != zeta.size() || out.size() != x.size()) {
    throw domain_error("moebius_reflect: dimension mismatch");
  }
  double dist2 = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - zeta[d];
    dist2 += diff * diff;
  }
  if (dist2 == 0.0) {
    throw domain_error("moebius_reflect: x == zeta is singular");
  }
  const double scale = (1.0 - norm2(x)) / dist2;
  for (std::size_t d = 0; d < x.size(); ++d) {
    out[d] = x[d] - scale * (zeta[d] - x[d]);
  }
}

double kernel_r(double theta, double rho, int n) {
  if (n < 3) throw domain_error("kernel_r: requires n >= 3");
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw domain_error("kernel_r: requires rho in [0, 1]");
  }
  const double s = std::sin(0.5 * theta);
  const double base = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * s * s;
  if (base == 0.0) {
    throw domain_error("kernel_r: singular at rho = 1, theta = 0");
  }
  return std::pow(base, 1.0 - 0.5 * n);
}

double kernel_s(double theta, double rho, int n) {
  if (n < 3) throw domain_error("kernel_s: requires n >= 3");
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw domain_error("kernel_s: requires rho in [0, 1]");
  }
  const double kappa = (1.0 - rho) / (1.0 + rho);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double s2 = s * s;
  const double c2 = c * c;
  // ratio = cos^2 / (cos^2 + kappa^2 sin^2) in [0, 1]; identically 1 when
  // kappa = 0, which realizes the removable limit at rho = 1, theta = pi/2.
  const double ratio = (kappa == 0.0) ? 1.0 : c2 / (c2 + kappa * kappa * s2);
  return std::pow(2.0 / (1.0 + rho), n - 2) * std::pow(s, n - 2) *
         std::pow(ratio, 0.5 * (n - 2));
}

double kernel_z(double z, double rho, int n) {
  if (n < 2) throw domain_error("kernel_z: requires n >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw domain_error("kernel_z: requires rho in [0, 1]");
  }
  const double alpha = (n - 2) * rho / n;
  const double c = 1.0 - alpha * alpha;
  const double root = std::sqrt(z * z + c);
  if (z >= 0.0) return (z + root) / (1.0 - alpha);
  return c / ((1.0 - alpha) * (root - z));
}

double kernel_q(double w, double z, int n, double rho) {
  const ProblemPoint pp(n, rho, 0.0);
  const double beta = pp.beta();
  return (n - beta) + n * z * w - beta * w * w;
}

double kernel_w(double w, int n, double rho) {
  if (n < 3) throw domain_error("kernel_w: requires n >= 3");
  const double kappa = (1.0 - rho) / (1.0 + rho);
  const double w2 = w * w;
  return std::pow(w, n - 2) /
         (std::pow(1.0 + w2, 0.5 * n + 1.0) *
          std::pow(1.0 + kappa * kappa * w2, 0.5 * n - 1.0));
}

QuadratureResult p_rho_result(double z, const ProblemPoint& pp,
                              const QuadratureConfig& cfg) {
  if (pp.n() < 3) throw domain_error("p_rho: requires n >= 3");
  const int n = pp.n();
  const double beta = pp.beta();
  const double nz = n * z;
  const double kappa = pp.kappa();
  const double kappa2 = kappa * kappa;
  const double upper = kernel_z(z, pp.rho(), n);
  BatchIntegrand f = [n, beta, nz, kappa2](std::span<const double> ws,
                                           std::span<double> out) {
    simd::p_rho_integrand(ws, out, n, beta, nz, kappa2);
  };
  return integrate(f, 0.0, upper, cfg);
}

double p_rho(double z, const ProblemPoint& pp, const QuadratureConfig& cfg) {
  return p_rho_result(z, pp, cfg).value;
}

double p1_closed(double z, int n) {
  if (n < 3) throw domain_error("p1_closed: requires n >= 3");
  const double zz = kernel_z(z, 1.0, n);
  return std::pow(zz, n - 1) /
         (n * std::pow(1.0 + zz * zz, 0.5 * n - 1.0));
}

double p_script(double y, int n) {
  if (n < 3) throw domain_error("p_script: requires n >= 3");
  // s = y + sqrt(y^2 + 1), computed without cancellation for y < 0
  const double root = std::sqrt(y * y + 1.0);
  const double s = (y >= 0.0) ? y + root : 1.0 / (root - y);
  return std::pow(s, n - 1) /
         std::pow(1.0 + (n - 1) * s * s, 0.5 * n - 1.0);
}

double majorant_a(double z, double a, double b) {
  if (!(a >= 0.0) || !(b > 0.0)) {
    throw domain_error("majorant_a: requires a >= 0 and b > 0");
  }
  return std::sqrt(a * z * z + b);
}

}  // namespace khav
