#pragma once

#include <span>

namespace khav::simd {

// Data-parallel inner loops behind the integral representations. Every
// function here has a scalar reference implementation and AVX2/NEON variants
// selected at runtime (see dispatch.hpp); all variants are equivalence-tested
// against the scalar path.

struct OracleSums {
  double abs_sum = 0.0;  // sum_i w_i |f_i|
  double sq_sum = 0.0;   // sum_i w_i f_i^2
};

// Directional-derivative magnitude of the ball's Poisson kernel, reduced to
// the plane spanned by the radial and direction vectors: for each sample with
// coordinates (z1, z2) = (<zeta, e_r>, <zeta, e_t>) and weight w, accumulates
// w |f| and w f^2 where
//   f = (-2 rho cos_tau D - n (1 - rho^2)(rho cos_tau - z1 cos_tau
//        - z2 sin_tau)) / D^{(n+2)/2},  D = 1 + rho^2 - 2 rho z1.
// Requires rho < 1.
OracleSums oracle_accumulate(std::span<const double> z1,
                             std::span<const double> z2,
                             std::span<const double> w, int n, double rho,
                             double cos_tau, double sin_tau);

// out[i] = ((n - beta) + nz w - beta w^2) w^{n-2}
//          / ((1 + w^2)^{n/2+1} (1 + kappa2 w^2)^{n/2-1}),  w = ws[i].
// nz is the product n * z; kappa2 = kappa^2.
void p_rho_integrand(std::span<const double> ws, std::span<double> out, int n,
                     double beta, double nz, double kappa2);

// out[i] = w^{n-1} / ((1 + w^2)^{n/2+1} (1 + kappa2 w^2)^{n/2-1}).
void tangential_integrand(std::span<const double> ws, std::span<double> out,
                          int n, double kappa2);

// sum_i weights[i] signs[i] P(y, zeta_i) for the ball's Poisson kernel, with
// sphere samples stored column-major: coords[d * count + i] is coordinate d
// of sample i. y has length n and |y| < 1.
double poisson_weighted_sum(std::span<const double> coords,
                            std::span<const double> weights,
                            std::span<const double> signs,
                            std::span<const double> y, int n);

}  // namespace khav::simd
