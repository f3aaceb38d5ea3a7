#include "fragmenta/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "fragmenta/assignment.hpp"
#include "fragmenta/cluster_forest.hpp"

namespace fragmenta {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Gallagher: return "gallagher";
    case SolverKind::PaikinTal: return "paikin-tal";
    case SolverKind::YuLp: return "yu-lp";
  }
  return "?";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (auto k : {SolverKind::Gallagher, SolverKind::PaikinTal, SolverKind::YuLp}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Metric default_metric(SolverKind kind) { return kind == SolverKind::PaikinTal ? Metric::L1Pred : Metric::MGC; }

namespace {

constexpr GridOffset kRight{0, 1};
constexpr GridOffset kDown{1, 0};

// Handles the inputs a table cannot describe (fewer than two pieces) and
// checks that table and pieces agree. Returns an assembly when done.
std::optional<Assembly> trivial_or_validate(std::span<const Piece> pieces, const MatchTable& table,
                                            const PuzzleSpec& spec) {
  if (static_cast<int>(pieces.size()) > spec.piece_count()) {
    throw std::invalid_argument("more pieces than grid cells");
  }
  if (pieces.size() < 2) {
    Assembly a(spec);
    if (!pieces.empty()) a.place(pieces.front().id, {0, 0});
    return a;
  }
  std::vector<PieceId> ids;
  for (const auto& p : pieces) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  if (ids != table.ids()) throw std::invalid_argument("match table does not describe the given pieces");
  return std::nullopt;
}

/// Row-major occupancy of the frame by table indices.
class Frame {
 public:
  explicit Frame(const PuzzleSpec& spec) : spec_(spec), cells_(static_cast<std::size_t>(spec.piece_count()), -1) {}

  bool inside(int r, int c) const { return r >= 0 && r < spec_.rows && c >= 0 && c < spec_.cols; }
  int at(int r, int c) const { return inside(r, c) ? cells_[static_cast<std::size_t>(r * spec_.cols + c)] : -1; }
  bool empty(int r, int c) const { return inside(r, c) && at(r, c) < 0; }
  void put(int r, int c, std::size_t idx) { cells_[static_cast<std::size_t>(r * spec_.cols + c)] = static_cast<int>(idx); }
  const PuzzleSpec& spec() const { return spec_; }

  /// Sum and count of D between a piece at (r, c) and its placed neighbors.
  std::pair<double, int> contact(const MatchTable& t, std::size_t idx, int r, int c) const {
    double sum = 0.0;
    int count = 0;
    if (int q = at(r, c - 1); q >= 0) sum += t(static_cast<std::size_t>(q), idx, Relation::LeftRight), ++count;
    if (int q = at(r, c + 1); q >= 0) sum += t(idx, static_cast<std::size_t>(q), Relation::LeftRight), ++count;
    if (int q = at(r - 1, c); q >= 0) sum += t(static_cast<std::size_t>(q), idx, Relation::TopBottom), ++count;
    if (int q = at(r + 1, c); q >= 0) sum += t(idx, static_cast<std::size_t>(q), Relation::TopBottom), ++count;
    return {sum, count};
  }

  Assembly to_assembly(const MatchTable& t) const {
    Assembly a(spec_);
    for (int r = 0; r < spec_.rows; ++r) {
      for (int c = 0; c < spec_.cols; ++c) {
        if (int q = at(r, c); q >= 0) a.place(t.id(static_cast<std::size_t>(q)), {r, c});
      }
    }
    return a;
  }

 private:
  PuzzleSpec spec_;
  std::vector<int> cells_;
};

struct ClusterView {
  std::vector<std::pair<std::size_t, GridOffset>> members;  // sorted by index
  ClusterForest::Bounds bounds;
};

// Fills empty cells one at a time: the cell with the most placed neighbors
// first (row-major ties), taking the unplaced piece with the lowest summed D.
void greedy_fill(Frame& frame, const MatchTable& table, std::vector<bool>& placed) {
  const auto& spec = frame.spec();
  for (;;) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < placed.size(); ++i) {
      if (!placed[i]) pending.push_back(i);
    }
    if (pending.empty()) return;
    int best_r = -1, best_c = -1, best_n = -1;
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        if (!frame.empty(r, c)) continue;
        const int n = (frame.at(r, c - 1) >= 0) + (frame.at(r, c + 1) >= 0) + (frame.at(r - 1, c) >= 0) +
                      (frame.at(r + 1, c) >= 0);
        if (n > best_n) best_r = r, best_c = c, best_n = n;
      }
    }
    if (best_r < 0) return;
    std::size_t choice = pending.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (auto idx : pending) {
      const double sum = frame.contact(table, idx, best_r, best_c).first;
      if (sum < best_sum) best_sum = sum, choice = idx;
    }
    frame.put(best_r, best_c, choice);
    placed[choice] = true;
  }
}

// Repeatedly places the pending cluster and translation with the lowest mean
// boundary D against placed pieces.
void place_clusters(Frame& frame, const MatchTable& table, std::vector<bool>& placed,
                    std::vector<const ClusterView*> pending) {
  const auto& spec = frame.spec();
  while (!pending.empty()) {
    struct Choice {
      double mean = std::numeric_limits<double>::infinity();
      std::size_t size = 0;
      int contacts = 0;
      std::size_t which = 0;
      int ty = 0, tx = 0;
    } best;
    bool found = false;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const auto& cl = *pending[k];
      for (int ty = -cl.bounds.min_row; ty <= spec.rows - 1 - cl.bounds.max_row; ++ty) {
        for (int tx = -cl.bounds.min_col; tx <= spec.cols - 1 - cl.bounds.max_col; ++tx) {
          bool fits = true;
          double sum = 0.0;
          int contacts = 0;
          for (const auto& [idx, off] : cl.members) {
            if (!frame.empty(off.row + ty, off.col + tx)) {
              fits = false;
              break;
            }
            auto [s, c] = frame.contact(table, idx, off.row + ty, off.col + tx);
            sum += s;
            contacts += c;
          }
          if (!fits || contacts == 0) continue;
          const double mean = sum / contacts;
          const bool better = !found || mean < best.mean ||
                              (mean == best.mean && (cl.members.size() > best.size ||
                                                     (cl.members.size() == best.size && contacts > best.contacts)));
          if (better) {
            best = {mean, cl.members.size(), contacts, k, ty, tx};
            found = true;
          }
        }
      }
    }
    if (!found) break;
    for (const auto& [idx, off] : pending[best.which]->members) {
      frame.put(off.row + best.ty, off.col + best.tx, idx);
      placed[idx] = true;
    }
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best.which));
  }

}

}  // namespace

Assembly solve_greedy_tree(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec) {
  if (auto done = trivial_or_validate(pieces, table, spec)) return *done;
  const std::size_t n = table.size();

  struct Candidate {
    double ratio;
    std::size_t i, j;
    Relation rel;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(n * (n - 1) * 2);
  for (auto rel : kAllRelations) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) candidates.push_back({ratio_score(table, i, j, rel), i, j, rel});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.ratio, a.i, a.j, a.rel) < std::tie(b.ratio, b.i, b.j, b.rel);
  });

  ClusterForest forest(n, spec.rows, spec.cols);
  std::size_t merges = 0;
  for (const auto& c : candidates) {
    if (merges + 1 == n) break;
    if (forest.try_union(c.i, c.j, c.rel == Relation::LeftRight ? kRight : kDown)) ++merges;
  }

  std::vector<ClusterView> clusters;
  for (auto root : forest.roots()) {
    ClusterView view{{}, forest.bounds(root)};
    for (auto m : forest.members(root)) view.members.emplace_back(m, forest.offset(m));
    std::sort(view.members.begin(), view.members.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    clusters.push_back(std::move(view));
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const ClusterView& a, const ClusterView& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.members.front().first < b.members.front().first;
  });

  Frame frame(spec);
  std::vector<bool> placed(n, false);

  // Anchor the largest cluster where most of it lies inside the frame.
  {
    const auto& big = clusters.front();
    int best_count = -1, best_ty = 0, best_tx = 0;
    for (int ty = -big.bounds.max_row; ty <= spec.rows - 1 - big.bounds.min_row; ++ty) {
      for (int tx = -big.bounds.max_col; tx <= spec.cols - 1 - big.bounds.min_col; ++tx) {
        int count = 0;
        for (const auto& [idx, off] : big.members) count += frame.inside(off.row + ty, off.col + tx);
        if (count > best_count) best_count = count, best_ty = ty, best_tx = tx;
      }
    }
    for (const auto& [idx, off] : big.members) {
      if (frame.inside(off.row + best_ty, off.col + best_tx)) {
        frame.put(off.row + best_ty, off.col + best_tx, idx);
        placed[idx] = true;
      }
    }
  }

  // Remaining multi-piece clusters: repeatedly place the cluster and
  // translation with the lowest mean boundary D against placed pieces.
  std::vector<const ClusterView*> pending;
  for (std::size_t k = 1; k < clusters.size(); ++k) {
    if (clusters[k].members.size() > 1) pending.push_back(&clusters[k]);
  }
  place_clusters(frame, table, placed, std::move(pending));

  greedy_fill(frame, table, placed);
  return frame.to_assembly(table);
}

namespace {

// Confidence that `candidate` belongs at `side` of the placed piece `anchor`,
// judged from the anchor's perspective.
double placement_confidence(const MatchTable& t, std::size_t anchor, std::size_t candidate, EdgeSide side) {
  double d = 0.0, second = 0.0;
  switch (side) {
    case EdgeSide::East:
      d = t(anchor, candidate, Relation::LeftRight);
      second = t.second_best(anchor, Relation::LeftRight, Direction::Forward);
      break;
    case EdgeSide::West:
      d = t(candidate, anchor, Relation::LeftRight);
      second = t.second_best(anchor, Relation::LeftRight, Direction::Backward);
      break;
    case EdgeSide::South:
      d = t(anchor, candidate, Relation::TopBottom);
      second = t.second_best(anchor, Relation::TopBottom, Direction::Forward);
      break;
    case EdgeSide::North:
      d = t(candidate, anchor, Relation::TopBottom);
      second = t.second_best(anchor, Relation::TopBottom, Direction::Backward);
      break;
  }
  return 1.0 - (d + kRatioEpsilon) / (second + kRatioEpsilon);
}

GridOffset step(EdgeSide side) {
  switch (side) {
    case EdgeSide::North: return {-1, 0};
    case EdgeSide::East: return {0, 1};
    case EdgeSide::South: return {1, 0};
    case EdgeSide::West: return {0, -1};
  }
  return {};
}

EdgeSide opposite(EdgeSide side) { return static_cast<EdgeSide>((static_cast<int>(side) + 2) % 4); }

}  // namespace

Assembly solve_placer(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec) {
  if (auto done = trivial_or_validate(pieces, table, spec)) return *done;
  const std::size_t n = table.size();

  // Seed: most mutual best buddies among the four sides, then highest summed
  // buddy confidence, then smallest id.
  const auto buddies = best_buddies(table);
  std::vector<int> buddy_count(n, 0);
  std::vector<double> buddy_conf(n, 0.0);
  for (const auto& b : buddies) {
    const EdgeSide toward_second = b.rel == Relation::LeftRight ? EdgeSide::East : EdgeSide::South;
    ++buddy_count[b.first];
    ++buddy_count[b.second];
    buddy_conf[b.first] += placement_confidence(table, b.first, b.second, toward_second);
    buddy_conf[b.second] += placement_confidence(table, b.second, b.first, opposite(toward_second));
  }
  std::size_t seed = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (buddy_count[i] > buddy_count[seed] ||
        (buddy_count[i] == buddy_count[seed] && buddy_conf[i] > buddy_conf[seed])) {
      seed = i;
    }
  }

  std::map<std::pair<int, int>, std::size_t> layout;  // (row, col) -> index, unbounded coordinates
  std::vector<bool> placed(n, false);
  int min_r = 0, max_r = 0, min_c = 0, max_c = 0;
  layout[{0, 0}] = seed;
  placed[seed] = true;

  for (std::size_t count = 1; count < n; ++count) {
    // Open slots adjacent to placed pieces that keep the layout inside an
    // rows x cols window, in row-major order.
    std::map<std::pair<int, int>, std::vector<std::pair<std::size_t, EdgeSide>>> slots;
    for (const auto& [cell, idx] : layout) {
      for (auto side : kAllSides) {
        const GridOffset d = step(side);
        const std::pair<int, int> slot{cell.first + d.row, cell.second + d.col};
        if (layout.count(slot)) continue;
        const int h = std::max(max_r, slot.first) - std::min(min_r, slot.first) + 1;
        const int w = std::max(max_c, slot.second) - std::min(min_c, slot.second) + 1;
        if (h > spec.rows || w > spec.cols) continue;
        slots[slot].emplace_back(idx, side);
      }
    }
    double best_conf = -std::numeric_limits<double>::infinity();
    std::size_t best_piece = n;
    std::pair<int, int> best_slot{};
    for (std::size_t c = 0; c < n; ++c) {
      if (placed[c]) continue;
      for (const auto& [slot, anchors] : slots) {
        double sum = 0.0;
        for (const auto& [anchor, side] : anchors) sum += placement_confidence(table, anchor, c, side);
        const double conf = sum / static_cast<double>(anchors.size());
        // Strict improvement keeps the first (smallest id, then slot) on ties.
        if (conf > best_conf) {
          best_conf = conf;
          best_piece = c;
          best_slot = slot;
        }
      }
    }
    if (best_piece == n) throw std::logic_error("placer: no open slot inside the window");
    layout[best_slot] = best_piece;
    placed[best_piece] = true;
    min_r = std::min(min_r, best_slot.first);
    max_r = std::max(max_r, best_slot.first);
    min_c = std::min(min_c, best_slot.second);
    max_c = std::max(max_c, best_slot.second);
  }

  Assembly a(spec);
  for (const auto& [cell, idx] : layout) a.place(table.id(idx), {cell.first - min_r, cell.second - min_c});
  return a;
}

namespace {

// Deactivates the weakest active constraint touching each group of pieces
// that round to the same cell.
bool reject_collisions(std::vector<MatchConstraint>& constraints, std::span<const double> rows,
                       std::span<const double> cols) {
  std::vector<std::size_t> parent(rows.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (const auto& c : constraints) {
    if (c.active) parent[root(c.first)] = root(c.second);
  }
  std::map<std::tuple<std::size_t, long, long>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cells[{root(i), std::lround(rows[i]), std::lround(cols[i])}].push_back(i);
  }
  bool changed = false;
  for (const auto& [cell, group] : cells) {
    if (group.size() < 2) continue;
    MatchConstraint* weakest = nullptr;
    for (auto& c : constraints) {
      if (!c.active) continue;
      const bool touches = std::find(group.begin(), group.end(), c.first) != group.end() ||
                           std::find(group.begin(), group.end(), c.second) != group.end();
      if (touches && (!weakest || c.weight < weakest->weight)) weakest = &c;
    }
    if (weakest) {
      weakest->active = false;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

LpTrace solve_lp_traced(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec,
                        std::vector<MatchConstraint> constraints) {
  LpTrace trace;
  if (auto done = trivial_or_validate(pieces, table, spec)) {
    trace.assembly = *done;
    return trace;
  }
  const std::size_t n = table.size();
  for (;;) {
    ++trace.iterations;
    trace.col_coords = solve_lp_axis(constraints, n, Axis::Col).coords;
    trace.row_coords = solve_lp_axis(constraints, n, Axis::Row).coords;
    bool changed = false;
    for (auto& c : constraints) {
      if (!c.active) continue;
      const double residual =
          std::abs(trace.col_coords[c.second] - trace.col_coords[c.first] - c.delta.col) +
          std::abs(trace.row_coords[c.second] - trace.row_coords[c.first] - c.delta.row);
      const bool keep = residual <= kResidualThreshold;
      if (keep != c.active) {
        c.active = keep;
        changed = true;
      }
    }
    if (!changed) changed = reject_collisions(constraints, trace.row_coords, trace.col_coords);
    if (!changed || trace.iterations >= kMaxLpIterations) break;
  }
  trace.constraints = std::move(constraints);

  // Snap the largest connected component by exact assignment after the
  // translation that keeps most of it inside the frame; fill the rest greedily.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (const auto& c : trace.constraints) {
    if (c.active) parent[root(c.first)] = root(c.second);
  }
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[root(i)];
  std::size_t main_root = root(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (size[root(i)] > size[main_root]) main_root = root(i);
  }
  std::vector<std::size_t> core;
  for (std::size_t i = 0; i < n; ++i) {
    if (root(i) == main_root) core.push_back(i);
  }
  std::vector<int> rr, cc;
  for (auto i : core) {
    rr.push_back(static_cast<int>(std::lround(trace.row_coords[i])));
    cc.push_back(static_cast<int>(std::lround(trace.col_coords[i])));
  }
  const auto [rmin, rmax] = std::minmax_element(rr.begin(), rr.end());
  const auto [cmin, cmax] = std::minmax_element(cc.begin(), cc.end());
  int best_count = -1, best_ty = 0, best_tx = 0;
  for (int ty = -*rmax; ty <= spec.rows - 1 - *rmin; ++ty) {
    for (int tx = -*cmax; tx <= spec.cols - 1 - *cmin; ++tx) {
      int count = 0;
      for (std::size_t k = 0; k < core.size(); ++k) count += spec.contains({rr[k] + ty, cc[k] + tx});
      if (count > best_count) best_count = count, best_ty = ty, best_tx = tx;
    }
  }
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(core.size()), spec.piece_count());
  for (std::size_t k = 0; k < core.size(); ++k) {
    const double y = trace.row_coords[core[k]] + best_ty;
    const double x = trace.col_coords[core[k]] + best_tx;
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        cost(static_cast<Eigen::Index>(k), r * spec.cols + c) = std::abs(x - c) + std::abs(y - r);
      }
    }
  }
  const auto cells = solve_assignment(cost);
  Frame frame(spec);
  std::vector<bool> placed(n, false);
  for (std::size_t k = 0; k < core.size(); ++k) {
    frame.put(cells[k] / spec.cols, cells[k] % spec.cols, core[k]);
    placed[core[k]] = true;
  }
  std::map<std::size_t, ClusterView> others;
  for (std::size_t i = 0; i < n; ++i) {
    if (root(i) == main_root || size[root(i)] < 2) continue;
    others[root(i)].members.emplace_back(i, GridOffset{static_cast<int>(std::lround(trace.row_coords[i])),
                                                       static_cast<int>(std::lround(trace.col_coords[i]))});
  }
  std::vector<const ClusterView*> pending;
  for (auto& [r, view] : others) {
    std::set<std::pair<int, int>> seen;
    bool fits = true;
    for (const auto& [idx, off] : view.members) fits = fits && seen.insert({off.row, off.col}).second;
    auto& b = view.bounds;
    b = {seen.begin()->first, seen.begin()->second, seen.begin()->first, seen.begin()->second};
    for (const auto& [row, col] : seen) {
      b.min_row = std::min(b.min_row, row), b.max_row = std::max(b.max_row, row);
      b.min_col = std::min(b.min_col, col), b.max_col = std::max(b.max_col, col);
    }
    if (fits && b.height() <= spec.rows && b.width() <= spec.cols) {
      pending.push_back(&view);
    }
  }
  place_clusters(frame, table, placed, std::move(pending));
  greedy_fill(frame, table, placed);
  Assembly a = frame.to_assembly(table);
  trace.assembly = std::move(a);
  return trace;
}

Assembly solve_lp(std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec) {
  if (pieces.size() < 2) return solve_lp_traced(pieces, table, spec, {}).assembly;
  return solve_lp_traced(pieces, table, spec, build_lp_constraints(table, kLpTopK)).assembly;
}

Assembly solve(SolverKind kind, std::span<const Piece> pieces, const MatchTable& table, const PuzzleSpec& spec) {
  switch (kind) {
    case SolverKind::Gallagher: return solve_greedy_tree(pieces, table, spec);
    case SolverKind::PaikinTal: return solve_placer(pieces, table, spec);
    case SolverKind::YuLp: return solve_lp(pieces, table, spec);
  }
  throw std::invalid_argument("unknown solver");
}

}  // namespace fragmenta
