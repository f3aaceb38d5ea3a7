#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fragmenta/compatibility.hpp"
#include "fragmenta/lp.hpp"
#include "fragmenta/puzzle.hpp"

namespace fragmenta {

enum class SolverKind { Gallagher, PaikinTal, YuLp };

std::string_view to_string(SolverKind kind);  // "gallagher" | "paikin-tal" | "yu-lp"
std::optional<SolverKind> parse_solver(std::string_view name);

/// Compatibility metric each solver uses unless overridden.
Metric default_metric(SolverKind kind);

// All solvers take the solver-visible pieces and a table built from exactly
// those pieces, and return a complete injective assembly (every piece is
// placed as long as pieces.size() <= rows * cols).

/// Kruskal-style merging of offset clusters in ascending ratio-score order,
/// bounded by the frame, followed by cluster placement and a greedy fill.
Assembly solve_greedy_tree(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec);

/// Best-buddy seeded greedy placement with a confidence-ranked frontier
/// inside a sliding rows x cols window.
Assembly solve_placer(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec);

struct LpTrace {
  Assembly assembly;
  std::vector<MatchConstraint> constraints;  // final activity flags
  std::vector<double> row_coords;
  std::vector<double> col_coords;
  int iterations = 0;  // number of LP solves
};

inline constexpr int kMaxLpIterations = 10;
inline constexpr double kResidualThreshold = 0.5;
inline constexpr std::size_t kLpTopK = 1;

/// Iterative LP placement with residual-based match rejection followed by
/// an exact assignment of the continuous positions to grid cells.
LpTrace solve_lp_traced(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec,
                        std::vector<MatchConstraint> constraints);
Assembly solve_lp(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec);

Assembly solve(SolverKind kind, std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec);

}  // namespace fragmenta
