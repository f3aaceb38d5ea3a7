#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fragmenta/cluster_forest.hpp"
#include "fragmenta/compatibility.hpp"

namespace fragmenta {

enum class Axis { Row, Col };

/// Soft constraint pos(second) - pos(first) = delta, weighted by w.
/// Indices refer to the rows of the MatchTable the constraint came from.
struct MatchConstraint {
  std::size_t first = 0;
  std::size_t second = 0;
  GridOffset delta;  // (0, 1) for LeftRight, (1, 0) for TopBottom
  double weight = 1.0;
  bool active = true;

  double offset(Axis axis) const { return axis == Axis::Row ? delta.row : delta.col; }
  friend bool operator==(const MatchConstraint&, const MatchConstraint&) = default;
};

inline constexpr double kMaxConstraintWeight = 1e6;

/// Top-k lowest-D partners for every (piece, relation, direction), weight
/// second_best / (D + eps) capped at kMaxConstraintWeight. A constraint
/// reached from both of its endpoints is emitted once with the larger weight.
/// Sorted by (first, second, relation).
std::vector<MatchConstraint> build_lp_constraints(const MatchTable& table, std::size_t top_k = 2);

struct AxisSolution {
  std::vector<double> coords;  // anchor (lowest index) of each component at 0
  double objective = 0.0;      // sum over active constraints of w * |residual|
  bool degenerate = false;     // no active constraints
};

/// Exact minimizer of sum_m w_m |x_second - x_first - delta_m| over the
/// active constraints along one axis. Solved through its dual, a min-cost
/// circulation, by successive shortest paths; the final node potentials are
/// an optimal primal solution (integral when the offsets are integral).
AxisSolution solve_lp_axis(std::span<const MatchConstraint> constraints, std::size_t n_pieces, Axis axis);

double axis_objective(std::span<const MatchConstraint> constraints, std::span<const double> coords, Axis axis);

}  // namespace fragmenta
