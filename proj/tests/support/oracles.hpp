#pragma once

#include <cstddef>
#include <vector>

#include "fragmenta/pixel_buffer.hpp"
#include "fragmenta/puzzle.hpp"

namespace fragmenta::testing {

// Plain-loop recomputations used as test oracles. They share no code with
// the library beyond PixelBuffer access.

/// MGC for `a` left of `b` (lr) or `a` above `b` (!lr).
double oracle_mgc(const PixelBuffer& a, const PixelBuffer& b, bool lr);

/// Prediction L1 for `a` left of `b` (lr) or `a` above `b` (!lr).
double oracle_l1_pred(const PixelBuffer& a, const PixelBuffer& b, bool lr);

/// Counted pieces and how many of them sit at their true cell, by scanning
/// every grid cell of the assembly.
struct PositionCount {
  int counted = 0;
  int correct = 0;
};
PositionCount oracle_position_count(const Assembly& assembly, const Puzzle& puzzle);

struct AxisTerm {
  std::size_t first, second;
  int delta;
  double weight;
};

/// Minimum of sum w |x_second - x_first - delta| over integer coordinates
/// in [-n, n] with x_0 fixed at 0, by exhaustive enumeration.
double oracle_axis_minimum(const std::vector<AxisTerm>& terms, std::size_t n);

}  // namespace fragmenta::testing
