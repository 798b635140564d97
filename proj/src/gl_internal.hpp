#pragma once

#include <vector>

namespace khav::detail {

struct GlRule {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights of order m, computed once and cached.
// Thread-safe.
const GlRule& gl_rule(int m);

}  // namespace khav::detail
