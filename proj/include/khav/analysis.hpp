#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "khav/representations.hpp"

namespace khav {

struct SweepSample {
  double tau = 0.0;
  double value = 0.0;
};

struct SweepResult {
  std::vector<SweepSample> samples;  // ascending tau over [0, pi/2]
  double radial_value = 0.0;         // value at tau = 0
  double tangential_value = 0.0;     // value at tau = pi/2
  double argmax_tau = 0.0;
  double argmax_value = 0.0;
  bool conjecture_holds = false;
};

// Evaluates tau -> C(n, rho, tau) on a uniform grid of grid_size angles over
// [0, pi/2] (endpoints included; the last sample is exactly tangential) and
// refines the best bracket by golden-section search to 1e-6 rad. Among all
// values within a 1e-7 relative band of the maximum, the smallest tau is
// reported as argmax_tau, so a flat profile resolves to the radial direction
// rather than to grid noise. argmax_value is never below the best grid
// sample. conjecture_holds is true iff argmax_tau <= 1e-3 and no sample
// exceeds the radial value by more than a 1e-7 relative margin.
SweepResult sweep_tau(int n, double rho, int grid_size,
                      const QuadratureConfig& cfg = {});

struct ConjectureScan {
  std::vector<double> rhos;  // ascending
  std::vector<SweepResult> sweeps;
  double rho_star = 0.0;  // smallest grid rho from which every sweep holds
                          // onward; NaN if none does
};

ConjectureScan conjecture_scan(int n, std::span<const double> rhos,
                               int grid_size,
                               const QuadratureConfig& cfg = {});

// One checked point of a verification suite. For identity checks, residual
// is the absolute deviation |lhs - rhs| (possibly normalized; see each
// suite). For inequality checks, residual is the margin rhs - lhs, negative
// exactly when the inequality is violated.
struct VerificationPoint {
  std::vector<std::pair<std::string, double>> params;
  double residual = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string name;
  std::vector<VerificationPoint> grid;
  // Most adverse residual over the grid: the largest |residual| for identity
  // suites, the smallest residual (margin) for inequality suites.
  double worst_residual = 0.0;
  bool all_pass = false;
};

// The signed two-angle double integral vanishes identically; checks
// |signed| / |abs-value version| <= 1e-9 over the (rho, tau) grid.
// residual is the signed ratio.
VerificationReport verify_zero_integral(int n, std::span<const double> rhos,
                                        std::span<const double> taus,
                                        const QuadratureConfig& cfg = {});

// Pairwise agreement of the iterated and single-integral routes on a
// parameter grid: |double1 - final|, |double2 - final|, |double1 - double2|
// must stay within tol (double1 is skipped at rho = 1, where it is not
// defined). For n <= 3 the Moebius route is included with tolerance 10*tol.
// residual is the worst pairwise deviation at the point.
VerificationReport verify_cross_methods(std::span<const int> ns,
                                        std::span<const double> rhos,
                                        std::span<const double> taus,
                                        double tol,
                                        const QuadratureConfig& cfg = {});

// Hypergeometric layer: (1) series vs integral evaluation on random
// admissible parameters, (2) the quadratic argument transformation, (3) the
// two closed forms of the angular moment integrals J1 = J2 against
// quadrature and against their hypergeometric expressions.
VerificationReport verify_hypergeometric(std::uint64_t seed = 12345);

// Two-sided profile bound: P(y)^2 + P(-y)^2 <= (4(n-1)(3n-2) y^2 + 2 n^2)
// / n^n for each n in [n_lo, n_hi], y on a symmetric grid. Requires equality
// to 1e-12 at y = 0 and a strictly positive margin for |y| >= 0.1.
VerificationReport verify_km_inequality(int n_lo, int n_hi, double y_max,
                                        int grid_size);

// Boundary profile bound: P_1(z) + P_1(-z) <= 2 P_1(0) sqrt(K z^2 + 1) with
// K = (3n - 2)/4, same grid and pass rules as verify_km_inequality.
VerificationReport verify_p1_inequality(int n_lo, int n_hi, double z_max,
                                        int grid_size);

// Interior majorant bound at a fixed (n, rho): residual(z) =
// sqrt(K z^2 + 1) - (P_rho(z) + P_rho(-z)) / (2 P_rho(0)), checked to be
// >= -1e-9 (quadrature-limited) on a symmetric grid. This is exploratory:
// the bound provably holds near the boundary, and the report shows where it
// fails elsewhere.
VerificationReport verify_ineq_rho(int n, double rho, double K, double z_max,
                                   int grid_size,
                                   const QuadratureConfig& cfg = {});

// Moment-reduction identities behind the single-integral route: the weight
// normalization, the quadratic-integrand reduction, monotonicity of
// g(gamma) = sqrt((a gamma^2 + b(n-1)) / ((n-1)(1 + gamma^2))) when
// a/b <= n - 1, and the Cauchy-Schwarz comparison against the majorant.
VerificationReport verify_extremal_lemma(int n, double a, double b,
                                         const QuadratureConfig& cfg = {});

// K - F''(0) for F(z) = (P_rho(z) + P_rho(-z)) / (2 P_rho(0)), with F''(0)
// estimated by a Richardson-extrapolated central difference at steps h and
// h/2. A positive gap means the majorant sqrt(K z^2 + 1) is strictly wider
// than the profile at the origin.
double second_derivative_gap(int n, double rho, double K, double h,
                             const QuadratureConfig& cfg = {});

}  // namespace khav
