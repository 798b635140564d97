#pragma once

#include <span>

#include "khav/errors.hpp"
#include "khav/quadrature.hpp"

namespace khav {

// A (dimension, radius, angle) triple describing where the gradient constant
// is evaluated: n is the ambient dimension, rho = |x| the distance of the
// evaluation point from the origin, and tau the angle between the direction
// vector and the radial direction through x, folded into [0, pi/2].
//
// tau within 1e-12 of pi/2 is stored as exactly tangential; gamma() = tan(tau)
// is then undefined and throws.
class ProblemPoint {
 public:
  ProblemPoint(int n, double rho, double tau);

  static ProblemPoint radial(int n, double rho) {
    return ProblemPoint(n, rho, 0.0);
  }
  static ProblemPoint tangential(int n, double rho);

  int n() const { return n_; }
  double rho() const { return rho_; }
  double tau() const { return tau_; }
  bool is_tangential() const { return tangential_; }

  // Derived parameters. alpha + 2 beta / n = 1 and w_radial^2 = (n - beta) /
  // beta hold by construction.
  double alpha() const;     // (n - 2) rho / n
  double beta() const;      // (n - (n - 2) rho) / 2
  double kappa() const;     // (1 - rho) / (1 + rho)
  double w_radial() const;  // sqrt((n + (n - 2) rho) / (n - (n - 2) rho))
  double gamma() const;     // tan(tau); throws for tangential points

 private:
  int n_;
  double rho_;
  double tau_;
  bool tangential_;
};

// Reduces a concrete evaluation point x (|x| < 1) and unit direction ell to
// the (n, rho, tau) triple. The constants depend on x and ell only through
// that triple, by rotational symmetry. For x = 0 the angle is reported as 0.
// Throws domain_error if |x| >= 1 or if | |ell| - 1 | > 1e-10.
ProblemPoint canonicalize(std::span<const double> x,
                          std::span<const double> ell);

// Poisson kernel of the unit ball, P(x, zeta) = (1 - |x|^2) / |x - zeta|^n,
// and its gradient in x. zeta must be a unit vector (not checked).
double poisson(std::span<const double> x, std::span<const double> zeta, int n);
void poisson_gradient(std::span<const double> x, std::span<const double> zeta,
                      int n, std::span<double> out);

// Sphere automorphism eta = x - (1 - |x|^2)(zeta - x) / |x - zeta|^2, which
// maps the unit sphere to itself for |x| < 1 and is an involution there.
void moebius_reflect(std::span<const double> x, std::span<const double> zeta,
                     std::span<double> out);

// Radial kernel R(theta) = ((1 - rho)^2 + 4 rho sin^2(theta/2))^{1 - n/2},
// i.e. |x - eta|^{2 - n} written in the polar angle of eta relative to x.
// The base is computed in the form above so it stays exact near theta = 0.
// rho = 1, theta = 0 is singular and throws.
double kernel_r(double theta, double rho, int n);

// Angular weight
//   S(theta) = (2 / (1 + rho))^{n-2} sin^{n-2}(theta) cos^{n-2}(theta)
//              / (cos^2(theta) + kappa^2 sin^2(theta))^{n/2 - 1},
// kappa = (1 - rho) / (1 + rho), for theta in [0, pi/2]. Equivalent to
// sin^{n-2}(2 theta) / ((1 + rho^2 + 2 rho cos(2 theta)) / ... ) in its raw
// form, but the factored expression above has a removable singularity at
// rho = 1, theta = pi/2, where it evaluates to the limit value 1.
double kernel_s(double theta, double rho, int n);

// Upper integration limit Z(z) = (z + sqrt(z^2 + 1 - alpha^2)) / (1 - alpha),
// alpha = (n - 2) rho / n; the positive root of Q(., z) below. Evaluated in
// a catastrophic-cancellation-free form for z < 0.
double kernel_z(double z, double rho, int n);

// Quadratic factor Q(w, z) = (n - beta) + n z w - beta w^2.
double kernel_q(double w, double z, int n, double rho);

// Weight W(w) = w^{n-2} / ((1 + w^2)^{n/2 + 1} (1 + kappa^2 w^2)^{n/2 - 1}).
double kernel_w(double w, int n, double rho);

// P_rho(z) = integral of Q(w, z) W(w) dw over w in [0, Z(z)]. Defined for
// rho in [0, 1]; at rho = 1 it reduces to the closed form p1_closed.
// p_rho_result additionally reports the quadrature error estimate.
double p_rho(double z, const ProblemPoint& pp,
             const QuadratureConfig& cfg = {});
QuadratureResult p_rho_result(double z, const ProblemPoint& pp,
                              const QuadratureConfig& cfg = {});

// Closed form of P_rho at rho = 1:
//   P_1(z) = (1/n) Z^{n-1} / (1 + Z^2)^{n/2 - 1}, Z = kernel_z(z, 1, n).
double p1_closed(double z, int n);

// Normalized profile
//   P(y) = (y + sqrt(y^2 + 1))^{n-1} / (1 + (n-1)(y + sqrt(y^2+1))^2)^{n/2-1},
// related to p1_closed by
//   p1_closed(z, n) = ((n-1)^{(n-1)/2} / n) * p_script(n z / (2 sqrt(n-1))).
double p_script(double y, int n);

// Majorant A(z) = sqrt(a z^2 + b), a >= 0, b > 0.
double majorant_a(double z, double a, double b);

}  // namespace khav
