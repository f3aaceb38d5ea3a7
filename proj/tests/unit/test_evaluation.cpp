#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"

#include "fragmenta/evaluation.hpp"
#include "oracles.hpp"

using namespace fragmenta;

namespace {

Puzzle grid_puzzle(int rows, int cols) { return slice_image(PixelBuffer(cols * 4, rows * 4, 1), {rows, cols, 4}); }

Assembly from_cells(const Puzzle& pz, const std::vector<int>& cell_of_id) {
  Assembly a(pz.spec);
  for (std::size_t id = 0; id < cell_of_id.size(); ++id) {
    if (cell_of_id[id] < 0) continue;
    a.place(static_cast<PieceId>(id), {cell_of_id[id] / pz.spec.cols, cell_of_id[id] % pz.spec.cols});
  }
  return a;
}

PuzzleResult result(const std::string& solver, double level, std::optional<double> dc, bool perfect,
                    const std::string& source = "a") {
  PuzzleResult r;
  r.solver = solver;
  r.source_id = source;
  r.rows = r.cols = 6;
  r.corruption_type = "none";
  r.level = level;
  r.direct_comparison = dc;
  r.perfect = perfect;
  return r;
}

}  // namespace

TEST_CASE("ground truth scores 100") {
  const Puzzle pz = grid_puzzle(6, 6);
  const auto a = ground_truth_assembly(pz);
  CHECK(direct_comparison(a, pz) == 100.0);
  CHECK(perfect_reconstruction(a, pz));
}

TEST_CASE("one swap in a 3x3") {
  const Puzzle pz = grid_puzzle(3, 3);
  const auto a = from_cells(pz, {0, 1, 2, 3, 5, 4, 6, 7, 8});
  CHECK(*direct_comparison(a, pz) == doctest::Approx(700.0 / 9));
  CHECK_FALSE(perfect_reconstruction(a, pz));
}

TEST_CASE("missing pieces shrink the denominator") {
  Puzzle pz = grid_puzzle(3, 3);
  pz.piece(2).status = PieceStatus::Missing;
  pz.piece(7).status = PieceStatus::BlackSubstitute;
  // Black substitute at a wrong cell, pieces 4 and 8 misplaced.
  const auto a = from_cells(pz, {0, 1, -1, 3, 8, 5, 6, 4, 2});
  CHECK(*direct_comparison(a, pz) == doctest::Approx(500.0 / 7));
  CHECK_FALSE(perfect_reconstruction(a, pz));
  const auto b = from_cells(pz, {0, 1, -1, 3, 4, 5, 6, 2, 8});
  CHECK(direct_comparison(b, pz) == 100.0);
  CHECK(perfect_reconstruction(b, pz));
}

TEST_CASE("unplaced present pieces count as wrong") {
  const Puzzle pz = grid_puzzle(2, 2);
  const auto a = from_cells(pz, {0, 1, 2, -1});
  CHECK(direct_comparison(a, pz) == 75.0);
  CHECK_FALSE(perfect_reconstruction(a, pz));
}

TEST_CASE("empty counted set is undefined") {
  Puzzle pz = grid_puzzle(2, 2);
  for (auto& p : pz.pieces) p.status = PieceStatus::Missing;
  CHECK_FALSE(direct_comparison(ground_truth_assembly(pz), pz));
  CHECK_FALSE(perfect_reconstruction(ground_truth_assembly(pz), pz));
}

TEST_CASE("metrics agree with the position-count oracle") {
  std::mt19937_64 rng(4);
  Puzzle pz = grid_puzzle(3, 4);
  std::vector<int> cells(12);
  std::iota(cells.begin(), cells.end(), 0);
  for (int trial = 0; trial < 300; ++trial) {
    std::shuffle(cells.begin(), cells.end(), rng);
    for (auto& p : pz.pieces) p.status = rng() % 4 ? PieceStatus::Present : PieceStatus::BlackSubstitute;
    auto placed = cells;
    if (trial % 3 == 0) placed[rng() % 12] = -1;
    const auto a = from_cells(pz, placed);
    const auto oracle = testing::oracle_position_count(a, pz);
    const auto dc = direct_comparison(a, pz);
    if (oracle.counted == 0) {
      CHECK_FALSE(dc);
      continue;
    }
    CHECK(*dc == 100.0 * oracle.correct / oracle.counted);
    CHECK(perfect_reconstruction(a, pz) == (oracle.correct == oracle.counted));
    CHECK(perfect_reconstruction(a, pz) == (*dc == 100.0));
  }
}

TEST_CASE("aggregate single and pair") {
  const std::vector<PuzzleResult> one{result("gallagher", 0, 100.0, true)};
  const auto r1 = aggregate(one);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].mean_direct_comparison == 100.0);
  CHECK(r1[0].perfect_rate == 100.0);
  CHECK(r1[0].n == 1);

  const std::vector<PuzzleResult> two{result("gallagher", 0, 100.0, true), result("gallagher", 0, 0.0, false, "b")};
  const auto r2 = aggregate(two);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].mean_direct_comparison == 50.0);
  CHECK(r2[0].perfect_rate == 50.0);
}

TEST_CASE("aggregate skips undefined results and orders groups") {
  std::vector<PuzzleResult> rs{result("yu-lp", 10, 40.0, false), result("gallagher", 10, std::nullopt, false),
                               result("gallagher", 0, 90.0, false), result("gallagher", 10, 60.0, false, "b"),
                               result("paikin-tal", 50, std::nullopt, false)};
  const auto reports = aggregate(rs);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].solver == "gallagher");
  CHECK(reports[0].level == 0);
  CHECK(reports[1].level == 10);
  CHECK(reports[1].n == 1);
  CHECK(reports[1].mean_direct_comparison == 60.0);
  CHECK(reports[2].solver == "yu-lp");
}

TEST_CASE("aggregate ignores input order") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<PuzzleResult> rs;
  for (int i = 0; i < 40; ++i) {
    auto r = result(i % 2 ? "yu-lp" : "gallagher", 10.0 * (i % 3), u(rng), i % 5 == 0, "img" + std::to_string(i));
    rs.push_back(r);
  }
  const auto base = aggregate(rs);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(rs.begin(), rs.end(), rng);
    CHECK(aggregate(rs) == base);
  }
  for (const auto& g : base) {
    double lo = 100, hi = 0;
    for (const auto& r : rs)
      if (r.solver == g.solver && r.level == g.level) lo = std::min(lo, *r.direct_comparison), hi = std::max(hi, *r.direct_comparison);
    CHECK(g.mean_direct_comparison >= lo);
    CHECK(g.mean_direct_comparison <= hi);
  }
}
