#pragma once

#include "khav/errors.hpp"

namespace khav {

// Gamma function for positive real arguments (Lanczos approximation,
// relative error below 1e-13 on (0, 170]).
double gamma_fn(double x);

// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
double pochhammer(double a, int k);

enum class Hyp2f1Method {
  series,          // power series, terminates exactly when a or b is a non-positive integer
  euler_integral,  // Euler integral representation; requires c > b > 0
};

// Gauss hypergeometric function 2F1(a, b; c; z) for real z in (-1, 1).
// c must not be a non-positive integer.
double hyp2f1(double a, double b, double c, double z,
              Hyp2f1Method method = Hyp2f1Method::series);

struct QuadraticTransformPair {
  double lhs;  // 2F1(a/2, (a+1)/2; a-b+1; z)
  double rhs;  // ((1+sqrt(1-z))/2)^(-a) * 2F1(a, b; a-b+1; (1-sqrt(1-z))/(1+sqrt(1-z)))
};

// Both sides of the Gauss quadratic transformation, evaluated independently
// so callers can check the identity. Requires z in [0, 1).
QuadraticTransformPair hyp2f1_quadratic_lhs_rhs(double a, double b, double z);

// Surface area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
// surface_area(1) == 2 (a 0-sphere is two points). n >= 1.
double surface_area(int n);

}  // namespace khav
