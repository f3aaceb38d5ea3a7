#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fragmenta/puzzle.hpp"

namespace fragmenta {

/// Percentage of Present pieces placed at their true cell. Missing and
/// black-substitute pieces are not counted; unplaced Present pieces count as
/// wrong. nullopt when no Present piece exists.
std::optional<double> direct_comparison(const Assembly& assembly, const Puzzle& puzzle);

/// True iff there is at least one Present piece and every one of them sits
/// at its true cell.
bool perfect_reconstruction(const Assembly& assembly, const Puzzle& puzzle);

struct PuzzleResult {
  std::string solver;
  std::string source_id;
  int rows = 0;
  int cols = 0;
  std::string corruption_type;
  double level = 0.0;  // percent
  std::uint64_t seed = 0;
  std::optional<double> direct_comparison;
  bool perfect = false;
  double wall_time_s = 0.0;
};

struct ExperimentReport {
  std::string solver;
  int rows = 0;
  int cols = 0;
  std::string corruption_type;
  double level = 0.0;
  int n = 0;  // puzzles with a defined metric
  double mean_direct_comparison = 0.0;
  double perfect_rate = 0.0;  // percent

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Groups by (solver, rows, cols, corruption type, level) in lexicographic
/// key order. Results with an undefined metric are left out; groups without
/// any defined result are dropped. Member order inside a group is
/// canonicalized first, so the output does not depend on input order.
std::vector<ExperimentReport> aggregate(std::span<const PuzzleResult> results);

}  // namespace fragmenta
