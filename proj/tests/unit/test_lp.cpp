#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "doctest.h"

#include "fragmenta/lp.hpp"
#include "fragmenta/solvers.hpp"
#include "oracles.hpp"

using namespace fragmenta;

namespace {

MatchConstraint lr(std::size_t i, std::size_t j, double w) { return {i, j, {0, 1}, w, true}; }
MatchConstraint tb(std::size_t i, std::size_t j, double w) { return {i, j, {1, 0}, w, true}; }

std::vector<Piece> blank_pieces(int n) {
  std::vector<Piece> out;
  for (int i = 0; i < n; ++i) {
    Piece p;
    p.id = i;
    p.pixels = PixelBuffer(4, 4);
    out.push_back(p);
  }
  return out;
}

MatchTable dummy_table(int n) {
  std::vector<PieceId> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 1.0);
  return MatchTable::from_dissimilarities(Metric::MGC, ids, d, d);
}

}  // namespace

TEST_CASE("single constraint") {
  const std::vector<MatchConstraint> c{lr(0, 1, 1)};
  const auto x = solve_lp_axis(c, 2, Axis::Col);
  CHECK(x.coords == std::vector<double>{0, 1});
  CHECK(x.objective == 0.0);
  CHECK_FALSE(x.degenerate);
  const auto y = solve_lp_axis(c, 2, Axis::Row);
  CHECK(y.coords == std::vector<double>{0, 0});
}

TEST_CASE("consistent chain") {
  const std::vector<MatchConstraint> c{lr(0, 1, 2), lr(1, 2, 5)};
  const auto x = solve_lp_axis(c, 3, Axis::Col);
  CHECK(x.coords == std::vector<double>{0, 1, 2});
  CHECK(x.objective == 0.0);
}

TEST_CASE("weighted median resolves a conflict") {
  // j - i = 1 with weight 3 against j - i = 2 with weight 1.
  const std::vector<MatchConstraint> c{lr(0, 1, 3), {0, 1, {0, 2}, 1.0, true}};
  const auto x = solve_lp_axis(c, 2, Axis::Col);
  CHECK(x.coords[1] - x.coords[0] == 1.0);
  CHECK(x.objective == doctest::Approx(1.0));
}

TEST_CASE("no constraints is degenerate") {
  const auto x = solve_lp_axis({}, 3, Axis::Col);
  CHECK(x.degenerate);
  CHECK(x.coords == std::vector<double>{0, 0, 0});
  std::vector<MatchConstraint> off{lr(0, 1, 1)};
  off[0].active = false;
  CHECK(solve_lp_axis(off, 2, Axis::Row).degenerate);
}

TEST_CASE("each component is anchored at its lowest index") {
  const std::vector<MatchConstraint> c{lr(1, 0, 1), lr(3, 2, 1)};
  const auto x = solve_lp_axis(c, 4, Axis::Col);
  CHECK(x.coords == std::vector<double>{0, -1, 0, -1});
}

TEST_CASE("axis optimum equals exhaustive search") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_real_distribution<double> w(0.1, 10.0);
    std::vector<MatchConstraint> cons;
    const int m = count(rng);
    while (static_cast<int>(cons.size()) < m) {
      const auto i = pick(rng), j = pick(rng);
      if (i == j) continue;
      cons.push_back(rng() % 2 ? lr(i, j, w(rng)) : tb(i, j, w(rng)));
    }
    for (auto axis : {Axis::Row, Axis::Col}) {
      std::vector<testing::AxisTerm> terms;
      for (const auto& c : cons) terms.push_back({c.first, c.second, static_cast<int>(c.offset(axis)), c.weight});
      const auto sol = solve_lp_axis(cons, n, axis);
      CHECK(sol.objective == doctest::Approx(testing::oracle_axis_minimum(terms, n)).epsilon(1e-9));
      CHECK(sol.objective == doctest::Approx(axis_objective(cons, sol.coords, axis)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constraints for two pieces") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 3, 5, 0;
  const auto t = MatchTable::from_dissimilarities(Metric::MGC, {0, 1}, d, d);
  const auto cons = build_lp_constraints(t, 1);
  // Both orders under both relations; a lone partner has no second best,
  // so the weight saturates at the cap.
  REQUIRE(cons.size() == 4);
  for (const auto& c : cons) {
    CHECK(c.weight >= 1.0);
    CHECK(c.weight == kMaxConstraintWeight);
    CHECK(c.active);
  }
  CHECK_THROWS_AS(build_lp_constraints(t, 0), std::invalid_argument);
}

TEST_CASE("constraints match an independent enumeration") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const int n = 6;
  Eigen::MatrixXd l(n, n), b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) l(i, j) = u(rng), b(i, j) = u(rng);
  l(0, 1) = 0.0;  // perfect match
  const auto t = MatchTable::from_dissimilarities(Metric::MGC, {0, 1, 2, 3, 4, 5}, l, b);
  for (std::size_t k : {1u, 2u, 3u}) {
    std::map<std::tuple<std::size_t, std::size_t, int>, double> expect;
    for (int rel = 0; rel < 2; ++rel) {
      const Eigen::MatrixXd& m = rel == 0 ? l : b;
      for (int i = 0; i < n; ++i)
        for (int dir = 0; dir < 2; ++dir) {
          std::vector<std::pair<double, int>> row;
          for (int j = 0; j < n; ++j)
            if (j != i) row.push_back({dir == 0 ? m(i, j) : m(j, i), j});
          std::sort(row.begin(), row.end());
          const double second = row[1].first;
          for (std::size_t r = 0; r < k; ++r) {
            const int j = row[r].second;
            const auto key = dir == 0 ? std::tuple<std::size_t, std::size_t, int>(i, j, rel)
                                      : std::tuple<std::size_t, std::size_t, int>(j, i, rel);
            const double w = std::min(second / (row[r].first + 1e-9), 1e6);
            auto [it, fresh] = expect.try_emplace(key, w);
            if (!fresh) it->second = std::max(it->second, w);
          }
        }
    }
    const auto cons = build_lp_constraints(t, k);
    REQUIRE(cons.size() == expect.size());
    for (const auto& c : cons) {
      const auto key = std::tuple<std::size_t, std::size_t, int>(c.first, c.second, c.delta.row == 1 ? 1 : 0);
      REQUIRE(expect.count(key));
      CHECK(c.weight == doctest::Approx(expect[key]).epsilon(1e-12));
    }
    CHECK(std::is_sorted(cons.begin(), cons.end(), [](const auto& x, const auto& y) {
      return std::tie(x.first, x.second, x.delta.row) < std::tie(y.first, y.second, y.delta.row);
    }));
  }
  const auto cons = build_lp_constraints(t, 1);
  const auto perfect = std::find_if(cons.begin(), cons.end(), [](const auto& c) {
    return c.first == 0 && c.second == 1 && c.delta.col == 1;
  });
  REQUIRE(perfect != cons.end());
  CHECK(perfect->weight == kMaxConstraintWeight);
}

TEST_CASE("consistent constraints recover the grid in one round") {
  // 2 x 3 grid, ids row-major.
  std::vector<MatchConstraint> cons{lr(0, 1, 5), lr(1, 2, 5), lr(3, 4, 5), lr(4, 5, 5),
                                    tb(0, 3, 5), tb(1, 4, 5), tb(2, 5, 5)};
  const auto trace = solve_lp_traced(blank_pieces(6), dummy_table(6), {2, 3, 4}, cons);
  CHECK(trace.iterations == 1);
  for (int id = 0; id < 6; ++id) CHECK(trace.assembly.cell_of(id) == GridCell{id / 3, id % 3});
}

TEST_CASE("a weak false match is rejected in the second round") {
  std::vector<MatchConstraint> cons{lr(0, 1, 10), lr(2, 3, 10), tb(0, 2, 10), tb(1, 3, 10), lr(0, 3, 1)};
  const auto trace = solve_lp_traced(blank_pieces(4), dummy_table(4), {2, 2, 4}, cons);
  CHECK(trace.iterations == 2);
  const auto false_match = std::find_if(trace.constraints.begin(), trace.constraints.end(),
                                        [](const auto& c) { return c.first == 0 && c.second == 3; });
  REQUIRE(false_match != trace.constraints.end());
  CHECK_FALSE(false_match->active);
  for (const auto& c : trace.constraints)
    if (!(c.first == 0 && c.second == 3)) CHECK(c.active);
  for (int id = 0; id < 4; ++id) CHECK(trace.assembly.cell_of(id) == GridCell{id / 2, id % 2});
}

TEST_CASE("overlapping pieces lose their weakest match") {
  // 1 and 2 both claim the cell right of 0; 1 continues to 3 below it.
  std::vector<MatchConstraint> cons{lr(0, 1, 5), lr(0, 2, 4), tb(1, 3, 5), tb(0, 4, 5)};
  const auto trace = solve_lp_traced(blank_pieces(5), dummy_table(5), {2, 3, 4}, cons);
  const auto weak = std::find_if(trace.constraints.begin(), trace.constraints.end(),
                                 [](const auto& c) { return c.first == 0 && c.second == 2; });
  CHECK_FALSE(weak->active);
  CHECK(trace.assembly.cell_of(1) == GridCell{0, 1});
  CHECK(trace.assembly.cell_of(3) == GridCell{1, 1});
  CHECK(trace.assembly.size() == 5);
}

TEST_CASE("iteration cap") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, 15);
  std::vector<MatchConstraint> cons;
  while (cons.size() < 60) {
    auto i = pick(rng), j = pick(rng);
    if (i != j) cons.push_back(rng() % 2 ? lr(i, j, 1 + double(rng() % 5)) : tb(i, j, 1 + double(rng() % 5)));
  }
  const auto trace = solve_lp_traced(blank_pieces(16), dummy_table(16), {4, 4, 4}, cons);
  CHECK(trace.iterations >= 1);
  CHECK(trace.iterations <= kMaxLpIterations);
  CHECK(trace.assembly.size() == 16);
}
