#pragma once

#include <span>

#include "khav/kernels.hpp"
#include "khav/quadrature.hpp"
#include "khav/sphere_sampling.hpp"

namespace khav {

// The independent routes to the same number. Each evaluator below computes
// the rescaled gradient constant
//   C(x; ell) = (1 - |x|) * sup { |d/dt u(x + t ell)| : |u| <= 1 harmonic },
// which stays finite up to the boundary; the un-rescaled supremum is
// C / (1 - rho).
enum class Method {
  sphere_oracle,   // direct surface integral over sphere samples
  moebius_sphere,  // sphere integral after a Moebius change of variables
  double1,         // iterated 2D integral in polar/azimuthal angles
  double2,         // iterated 2D integral with the algebraic angular weight
  final_1d,        // reduction to a single profile integral
};

const char* method_name(Method m);

struct ConstantResult {
  double value = 0.0;
  double err_est = 0.0;
};

// Single-integral form. Dispatches on the angle: tangential points use the
// half-line profile integral, radial points the closed-length profile at
// z = 0, and everything in between the two-sided profile combination.
// Defined for n >= 3, the whole closed ball 0 <= rho <= 1.
ConstantResult c_final(const ProblemPoint& pp, const QuadratureConfig& cfg = {});

// Iterated 2D form over the polar angle of eta and the azimuth, with the
// distance kernel R. The polar integrand develops a boundary layer of width
// 1 - rho, so rho = 1 is out of domain here. n >= 3.
ConstantResult c_double1(const ProblemPoint& pp,
                         const QuadratureConfig& cfg = {});

// Iterated 2D form in the (theta, phi) angles with the algebraic weight S.
// Valid on the whole closed ball 0 <= rho <= 1, n >= 3. Inner integrals are
// split exactly at the sign changes of the linear factor.
ConstantResult c_double2(const ProblemPoint& pp,
                         const QuadratureConfig& cfg = {});

// Sphere-integral form after the Moebius change of variables, reduced to
// iterated angular integrals. n = 2 or 3 (higher dimensions need the
// sampling variant below). rho < 1.
ConstantResult c_moebius(const ProblemPoint& pp,
                         const QuadratureConfig& cfg = {});

// Same integrand, evaluated with a sphere sample set (works for any n >= 2,
// rho < 1). err_est is one standard error for Monte Carlo samples, 0 for
// grids.
ConstantResult c_moebius_mc(const ProblemPoint& pp,
                            const SphereSamples& samples);

// Definition-level oracle: integrates |<grad P(x, .), ell>| directly over
// the sphere samples and multiplies by (1 - rho). Requires rho < 1 and
// samples.dim() == pp.n(). err_est as in c_moebius_mc.
ConstantResult c_sphere_oracle(const ProblemPoint& pp,
                               const SphereSamples& samples);

// First two moments of the oracle integrand |<grad P(x, .), ell>| under the
// normalized surface measure, computed by deterministic quadrature on the
// two-dimensional reduction (polar substitution in <zeta, e1>; the azimuthal
// integrals are elementary). mean * (1 - rho) reproduces c_final up to
// quadrature error, and
//   var = second - mean^2
// is the exact per-sample variance of the Monte-Carlo estimator behind
// c_sphere_oracle, so the N-sample estimate of C carries standard deviation
// (1 - rho) * sqrt(var / N). The sample-based err_est of c_sphere_oracle
// underestimates that badly near the boundary in higher dimensions (the
// integrand mass concentrates on a spherical cap that a feasible sample
// rarely hits), which is what this function exists to quantify. Requires
// n >= 3 and rho < 1.
struct OracleMoments {
  double mean = 0.0;    // E |f|
  double second = 0.0;  // E f^2
};
OracleMoments oracle_moments(const ProblemPoint& pp,
                             const QuadratureConfig& cfg = {});

// Boundary (half-space) constant as a function of the angle. tau within
// 1e-12 of pi/2 returns exactly 2/pi. At tau = 0 the quadrature value is
// cross-checked against the closed radial form to 1e-10 (accuracy_error on
// mismatch). n >= 3.
ConstantResult c_halfspace(int n, double tau, const QuadratureConfig& cfg = {});

// Value of C at the center, c_zero(n) = C(0; ell). Exact (no quadrature).
// n >= 2.
double c_zero(int n);

// Uniform bound c_zero(n) / (1 - rho) for the un-rescaled constant
// C(x; ell) / (1 - rho) ... <= global_bound(n, rho) whenever |x| <= rho.
// Requires rho < 1.
double global_bound(int n, double rho);

// The signed version of the double2 inner integral vanishes identically;
// this evaluates both the signed and the absolute-value double integral in
// the same normalization (no prefactor) so callers can form the ratio.
struct ZeroIntegralResult {
  double signed_value = 0.0;
  double abs_value = 0.0;
};
ZeroIntegralResult zero_integral_check(const ProblemPoint& pp,
                                       const QuadratureConfig& cfg = {});

// Central difference (U(x + h ell) - U(x - h ell)) / (2h) of the harmonic
// extension U of the extremizing boundary data sign(<grad P(x, .), ell>),
// evaluated with the given sphere samples. Approximates the un-rescaled
// constant C / (1 - rho). Requires rho + h < 1 and h > 0.
double extremal_derivative(const ProblemPoint& pp, double h,
                           const SphereSamples& samples);

// The harmonic extension U above evaluated at an arbitrary interior point y
// (|y| < 1); |U| <= 1 up to sampling error.
double extremal_extension_value(const ProblemPoint& pp,
                                const SphereSamples& samples,
                                std::span<const double> y);

}  // namespace khav
