#include "fragmenta/evaluation.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace fragmenta {

namespace {

std::pair<int, int> count_correct(const Assembly& assembly, const Puzzle& puzzle) {
  int counted = 0, correct = 0;
  for (const auto& p : puzzle.pieces) {
    if (!p.counted()) continue;
    ++counted;
    auto cell = assembly.cell_of(p.id);
    if (cell && *cell == puzzle.ground_truth.at(static_cast<std::size_t>(p.id))) ++correct;
  }
  return {counted, correct};
}

}  // namespace

std::optional<double> direct_comparison(const Assembly& assembly, const Puzzle& puzzle) {
  const auto [counted, correct] = count_correct(assembly, puzzle);
  if (counted == 0) return std::nullopt;
  return 100.0 * correct / counted;
}

bool perfect_reconstruction(const Assembly& assembly, const Puzzle& puzzle) {
  const auto [counted, correct] = count_correct(assembly, puzzle);
  return counted > 0 && counted == correct;
}

std::vector<ExperimentReport> aggregate(std::span<const PuzzleResult> results) {
  using Key = std::tuple<std::string, int, int, std::string, double>;
  std::map<Key, std::vector<const PuzzleResult*>> groups;
  for (const auto& r : results) {
    if (!r.direct_comparison) continue;
    groups[{r.solver, r.rows, r.cols, r.corruption_type, r.level}].push_back(&r);
  }
  std::vector<ExperimentReport> out;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(), [](const PuzzleResult* a, const PuzzleResult* b) {
      return std::tie(a->source_id, a->seed, *a->direct_comparison, a->perfect) <
             std::tie(b->source_id, b->seed, *b->direct_comparison, b->perfect);
    });
    double sum = 0.0;
    int perfect = 0;
    for (const auto* m : members) {
      sum += *m->direct_comparison;
      perfect += m->perfect;
    }
    const auto n = static_cast<int>(members.size());
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), std::get<4>(key), n,
                   sum / n, 100.0 * perfect / n});
  }
  return out;
}

}  // namespace fragmenta
