#include "khav/sphere_sampling.hpp"

#include <cmath>
#include <cstddef>

#include "gl_internal.hpp"

namespace khav {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kAxisCap = 2048;

// Finalizer of the splitmix64 generator. Indexing the stream by a counter
// gives random access: element k of the sequential generator seeded with s
// is exactly mix64(s + (k+1) * kGolden).
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_at(std::uint64_t seed, std::uint64_t k) {
  return mix64(seed + (k + 1) * kGolden);
}

// uniform in (0, 1]; never 0, so log() below is safe
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

SphereSamples::SphereSamples(int n, std::size_t count, SphereScheme scheme,
                             std::uint64_t seed)
    : n_(n), count_(0), scheme_(scheme), seed_(seed) {
  if (n < 2) throw domain_error("SphereSamples: requires n >= 2");
  if (count == 0) throw domain_error("SphereSamples: requires count >= 1");

  if (scheme == SphereScheme::monte_carlo) {
    count_ = count;
    coords_.resize(static_cast<std::size_t>(n) * count);
    weights_.assign(count, 1.0 / static_cast<double>(count));
    const std::uint64_t pairs = (static_cast<std::uint64_t>(n) + 1) / 2;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < count; ++i) {
      double norm = 0.0;
      for (std::uint64_t attempt = 0;; ++attempt) {
        // counters are unique per (attempt, point, pair), making every draw
        // a pure function of the seed
        const std::uint64_t base =
            (attempt * count + i) * pairs * 2;
        for (int d = 0; d < n; d += 2) {
          const std::uint64_t k = base + static_cast<std::uint64_t>(d);
          const double u1 = uniform01(stream_at(seed, k));
          const double u2 = uniform01(stream_at(seed, k + 1));
          const double r = std::sqrt(-2.0 * std::log(u1));
          g[d] = r * std::cos(kTwoPi * u2);
          if (d + 1 < n) g[d + 1] = r * std::sin(kTwoPi * u2);
        }
        norm = 0.0;
        for (int d = 0; d < n; ++d) norm += g[d] * g[d];
        norm = std::sqrt(norm);
        if (norm > 1e-12) break;  // astronomically likely on the first try
      }
      for (int d = 0; d < n; ++d) {
        coords_[static_cast<std::size_t>(d) * count + i] = g[d] / norm;
      }
    }
    return;
  }

  // latlong_grid
  if (n == 2) {
    if (count > kAxisCap * kAxisCap) {
      throw domain_error("SphereSamples: circle grid capped at 2048^2 points");
    }
    count_ = count;
    coords_.resize(2 * count);
    weights_.assign(count, 1.0 / static_cast<double>(count));
    for (std::size_t j = 0; j < count; ++j) {
      const double phi =
          kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(count);
      coords_[j] = std::cos(phi);
      coords_[count + j] = std::sin(phi);
    }
    return;
  }
  if (n != 3) {
    throw domain_error("SphereSamples: latlong_grid supports n = 2 or n = 3");
  }
  std::size_t m = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(count))));
  if (m < 2) m = 2;
  if (m > kAxisCap) {
    throw domain_error("SphereSamples: grid capped at 2048 nodes per axis");
  }
  const detail::GlRule& rule = detail::gl_rule(static_cast<int>(m));
  count_ = m * m;
  coords_.resize(3 * count_);
  weights_.resize(count_);
  for (std::size_t a = 0; a < m; ++a) {
    const double u = rule.x[a];       // polar cosine
    const double pw = 0.5 * rule.w[a];  // GL weights sum to 2
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (std::size_t j = 0; j < m; ++j) {
      const double phi =
          kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
      const std::size_t i = a * m + j;
      coords_[i] = u;
      coords_[count_ + i] = s * std::cos(phi);
      coords_[2 * count_ + i] = s * std::sin(phi);
      weights_[i] = pw / static_cast<double>(m);
    }
  }
}

std::span<const double> SphereSamples::component(int d) const {
  if (d < 0 || d >= n_) throw domain_error("SphereSamples: bad component");
  return std::span<const double>(coords_.data() +
                                     static_cast<std::size_t>(d) * count_,
                                 count_);
}

void SphereSamples::point(std::size_t i, std::span<double> out) const {
  if (i >= count_) throw domain_error("SphereSamples: index out of range");
  if (out.size() != static_cast<std::size_t>(n_)) {
    throw domain_error("SphereSamples: output span has wrong size");
  }
  for (int d = 0; d < n_; ++d) {
    out[d] = coords_[static_cast<std::size_t>(d) * count_ + i];
  }
}

}  // namespace khav
