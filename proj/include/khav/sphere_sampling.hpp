#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "khav/errors.hpp"

namespace khav {

enum class SphereScheme {
  monte_carlo,   // iid uniform points, weights 1/count, reproducible from seed
  latlong_grid,  // deterministic product rule (n = 2 or 3), seed ignored
};

// A weighted point set on the unit sphere in R^n, used as a cubature rule:
// integrals against the normalized surface measure are approximated by
// sum_i weights[i] f(point_i), and the weights sum to 1.
//
// monte_carlo: points are drawn by normalizing n-dimensional Gaussian
// vectors generated from a counter-based splitmix64 stream, so any point is
// a pure function of (seed, index) and the set is reproducible across runs
// and platforms. Valid for every n >= 2.
//
// latlong_grid: a deterministic product rule. For n = 2 it is the midpoint
// rule with `count` angles on the circle. For n = 3 it uses M = ceil(sqrt(
// count)) Gauss-Legendre nodes in the polar cosine times M midpoint azimuth
// angles (so size() is M^2, which may differ from the requested count). M is
// capped at 2048 per axis; requests beyond the cap and grids with n >= 4
// throw domain_error.
class SphereSamples {
 public:
  SphereSamples(int n, std::size_t count, SphereScheme scheme,
                std::uint64_t seed = 0);

  int dim() const { return n_; }
  std::size_t size() const { return count_; }
  SphereScheme scheme() const { return scheme_; }
  std::uint64_t seed() const { return seed_; }

  // Coordinates are stored column-major: component(d)[i] is coordinate d of
  // point i, and coords() is the n columns back to back.
  std::span<const double> component(int d) const;
  std::span<const double> coords() const { return coords_; }
  std::span<const double> weights() const { return weights_; }
  void point(std::size_t i, std::span<double> out) const;

 private:
  int n_;
  std::size_t count_;
  SphereScheme scheme_;
  std::uint64_t seed_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

}  // namespace khav
