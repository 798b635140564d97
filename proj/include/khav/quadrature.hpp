#pragma once

#include <functional>
#include <span>

#include "khav/errors.hpp"

namespace khav {

// Scalar integrand f(x).
using Integrand = std::function<double(double)>;

// Batch integrand: fill ys[i] = f(xs[i]) for all i. The quadrature driver
// hands over whole panels at once so implementations are free to vectorize.
using BatchIntegrand =
    std::function<void(std::span<const double>, std::span<double>)>;

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_depth = 28;
  int panel_order = 15;  // Gauss-Legendre order; the embedded estimate uses
                         // the rule of half this order
};

struct QuadratureResult {
  double value = 0.0;
  double err_est = 0.0;  // accumulated panel error estimates
};

// Adaptive Gauss-Legendre integration of f over [a, b]. Each panel is
// evaluated with the rule of `panel_order` points and the rule of half that
// order; the difference drives bisection. A panel is accepted when its error
// estimate is below max(abs_tol, rel_tol * |I0|) * len / (b - a), where I0 is
// the first whole-interval estimate. Panels are refined depth-first,
// left-to-right, and partial sums accumulate in that fixed order, so results
// are bitwise deterministic. If max_depth is exhausted anywhere, the driver
// finishes the remaining panels best-effort and then throws accuracy_error
// carrying the partial value and error estimate.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureConfig& cfg = {});
QuadratureResult integrate(const BatchIntegrand& f, double a, double b,
                           const QuadratureConfig& cfg = {});

// Integral of g(t) (1 - t^2)^{(n-4)/2} dt over t in [0, 1], evaluated through
// the substitution t = sin(theta) so the endpoint t = 1 is regular for every
// n >= 3 (the weight becomes cos^{n-3}(theta) on [0, pi/2]).
QuadratureResult integrate_t_weight(const Integrand& g, int n,
                                    const QuadratureConfig& cfg = {});

// Integral of f(w) dw over w in [0, infinity), evaluated through the
// substitution w = tan(theta) on [0, pi/2). f must decay fast enough that
// f(tan(theta)) / cos^2(theta) stays bounded as theta -> pi/2.
QuadratureResult integrate_halfline(const Integrand& f,
                                    const QuadratureConfig& cfg = {});
QuadratureResult integrate_halfline(const BatchIntegrand& f,
                                    const QuadratureConfig& cfg = {});

}  // namespace khav
