#include "fragmenta/cluster_forest.hpp"

#include <algorithm>

namespace fragmenta {

ClusterForest::ClusterForest(std::size_t n, int max_rows, int max_cols)
    : parent_(n), to_parent_(n), members_(n), occupied_(n), bounds_(n), max_rows_(max_rows), max_cols_(max_cols) {
  for (std::size_t i = 0; i < n; ++i) {
    parent_[i] = i;
    members_[i] = {i};
    occupied_[i].emplace(key({0, 0}), i);
  }
}

std::size_t ClusterForest::find(std::size_t i) {
  if (parent_[i] == i) return i;
  const std::size_t p = parent_[i];
  const std::size_t root = find(p);
  // p now points at root directly, so to_parent_[p] is p's root offset.
  if (p != root) to_parent_[i] = to_parent_[i] + to_parent_[p];
  parent_[i] = root;
  return root;
}

GridOffset ClusterForest::offset(std::size_t i) {
  const std::size_t root = find(i);
  return i == root ? GridOffset{} : to_parent_[i];
}

bool ClusterForest::try_union(std::size_t i, std::size_t j, GridOffset delta) {
  std::size_t ri = find(i), rj = find(j);
  if (ri == rj) return false;
  // Translation taking j-cluster coordinates into i-cluster coordinates.
  GridOffset shift = offset(i) + delta - offset(j);
  if (members_[ri].size() < members_[rj].size()) {
    std::swap(ri, rj);
    shift = GridOffset{} - shift;
  }
  const Bounds& big = bounds_[ri];
  const Bounds& small = bounds_[rj];
  Bounds merged{std::min(big.min_row, small.min_row + shift.row), std::min(big.min_col, small.min_col + shift.col),
                std::max(big.max_row, small.max_row + shift.row), std::max(big.max_col, small.max_col + shift.col)};
  if (merged.height() > max_rows_ || merged.width() > max_cols_) return false;
  for (const auto& [cell, piece] : occupied_[rj]) {
    (void)piece;
    if (occupied_[ri].count(key(unkey(cell) + shift))) return false;
  }
  for (const auto& [cell, piece] : occupied_[rj]) {
    occupied_[ri].emplace(key(unkey(cell) + shift), piece);
  }
  occupied_[rj].clear();
  parent_[rj] = ri;
  to_parent_[rj] = shift;
  members_[ri].insert(members_[ri].end(), members_[rj].begin(), members_[rj].end());
  members_[rj].clear();
  bounds_[ri] = merged;
  return true;
}

std::vector<std::size_t> ClusterForest::roots() {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (find(i) == i) out.push_back(i);
  }
  return out;
}

}  // namespace fragmenta
