#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace fragmenta {

struct GridOffset {
  int row = 0;
  int col = 0;

  GridOffset operator+(GridOffset o) const { return {row + o.row, col + o.col}; }
  GridOffset operator-(GridOffset o) const { return {row - o.row, col - o.col}; }
  friend bool operator==(const GridOffset&, const GridOffset&) = default;
};

/// Disjoint sets of pieces where every piece carries an integer grid offset
/// relative to its cluster root. Unions translate whole clusters and are
/// refused when they would stack two pieces on one cell or grow the
/// cluster's bounding box beyond the frame.
class ClusterForest {
 public:
  struct Bounds {
    int min_row = 0, min_col = 0, max_row = 0, max_col = 0;
    int height() const { return max_row - min_row + 1; }
    int width() const { return max_col - min_col + 1; }
  };

  explicit ClusterForest(std::size_t n, int max_rows = 1 << 20, int max_cols = 1 << 20);

  std::size_t size() const { return parent_.size(); }
  std::size_t find(std::size_t i);
  /// Offset of i relative to its root.
  GridOffset offset(std::size_t i);

  /// Joins the clusters of i and j so that offset(j) - offset(i) == delta.
  /// Returns false, leaving the forest untouched, if i and j are already in
  /// one cluster or the translated clusters collide or exceed the frame.
  bool try_union(std::size_t i, std::size_t j, GridOffset delta);

  /// Members of the cluster rooted at `root`, in insertion order.
  const std::vector<std::size_t>& members(std::size_t root) const { return members_[root]; }
  Bounds bounds(std::size_t root) const { return bounds_[root]; }
  std::size_t cluster_size(std::size_t root) const { return members_[root].size(); }
  std::vector<std::size_t> roots();

 private:
  static long long key(GridOffset o) {
    return static_cast<long long>(o.row) * (1LL << 32) + static_cast<long long>(static_cast<std::uint32_t>(o.col));
  }
  static GridOffset unkey(long long k) {
    return {static_cast<int>(k >> 32), static_cast<int>(static_cast<std::uint32_t>(k & 0xffffffffLL))};
  }

  std::vector<std::size_t> parent_;
  std::vector<GridOffset> to_parent_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::unordered_map<long long, std::size_t>> occupied_;  // root-relative cell -> piece
  std::vector<Bounds> bounds_;
  int max_rows_;
  int max_cols_;
};

}  // namespace fragmenta
