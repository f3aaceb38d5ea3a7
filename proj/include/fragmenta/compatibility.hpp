#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "fragmenta/puzzle.hpp"

namespace fragmenta {

/// Ordered adjacency: LeftRight means the first piece sits left of the
/// second; TopBottom means the first piece sits above the second.
enum class Relation { LeftRight = 0, TopBottom = 1 };

inline constexpr std::array<Relation, 2> kAllRelations{Relation::LeftRight, Relation::TopBottom};

/// Forward: the piece is the first argument of D; Backward: the second.
enum class Direction { Forward = 0, Backward = 1 };

enum class Metric { MGC, L1Pred };

std::string_view to_string(Relation rel);
std::string_view to_string(Metric metric);  // "mgc" | "l1pred"
std::optional<Metric> parse_metric(std::string_view text);

/// Boundary strip of one piece side, ordered along the edge: the outermost
/// pixels and the ones one step inward.
template <typename Scalar = double>
struct EdgeStrip {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> outer;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> inner;
};

template <typename Scalar = double>
EdgeStrip<Scalar> edge_strip(const PixelBuffer& piece, EdgeSide side) {
  const int s = piece.width;
  EdgeStrip<Scalar> strip{Eigen::Matrix<Scalar, Eigen::Dynamic, 3>(s, 3), Eigen::Matrix<Scalar, Eigen::Dynamic, 3>(s, 3)};
  for (int t = 0; t < s; ++t) {
    int ox = 0, oy = 0, ix = 0, iy = 0;
    switch (side) {
      case EdgeSide::North: ox = ix = t; oy = 0; iy = 1; break;
      case EdgeSide::South: ox = ix = t; oy = s - 1; iy = s - 2; break;
      case EdgeSide::West: oy = iy = t; ox = 0; ix = 1; break;
      case EdgeSide::East: oy = iy = t; ox = s - 1; ix = s - 2; break;
    }
    for (int c = 0; c < 3; ++c) {
      strip.outer(t, c) = static_cast<Scalar>(piece.at(ox, oy, c));
      strip.inner(t, c) = static_cast<Scalar>(piece.at(ix, iy, c));
    }
  }
  return strip;
}

/// Mean boundary gradient and inverse regularized covariance of one side.
template <typename Scalar = double>
struct EdgeGradientStats {
  Eigen::Matrix<Scalar, 3, 1> mu;
  Eigen::Matrix<Scalar, 3, 3> sigma_inv;
};

/// Gradients are outer - inner along the side. The mean comes from the real
/// samples; the covariance from the samples augmented with the seven dummy
/// gradients {0, +-e_R, +-e_G, +-e_B}, which keeps it positive definite on
/// flat pieces.
template <typename Scalar = double>
EdgeGradientStats<Scalar> edge_gradient_stats(const EdgeStrip<Scalar>& strip) {
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> grad = strip.outer - strip.inner;
  const auto n = grad.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> augmented(n + 7, 3);
  augmented.topRows(n) = grad;
  augmented.bottomRows(7).setZero();
  for (int c = 0; c < 3; ++c) {
    augmented(n + 1 + 2 * c, c) = Scalar(1);
    augmented(n + 2 + 2 * c, c) = Scalar(-1);
  }
  const Vec3 aug_mean = augmented.colwise().mean().transpose();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> centered = augmented.rowwise() - aug_mean.transpose();
  const Mat3 cov = (centered.transpose() * centered) / Scalar(augmented.rows() - 1);
  return {grad.colwise().mean().transpose(), cov.inverse()};
}

/// One-sided Mahalanobis term: cross-boundary gradients (neighbor outer -
/// own outer) scored against the own side's gradient distribution.
template <typename Scalar = double>
Scalar mgc_one_sided(const EdgeStrip<Scalar>& own, const EdgeGradientStats<Scalar>& stats,
                     const EdgeStrip<Scalar>& neighbor) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 3> dev =
      (neighbor.outer - own.outer).rowwise() - stats.mu.transpose();
  return ((dev * stats.sigma_inv).array() * dev.array()).sum();
}

/// Symmetric MGC dissimilarity for `a` placed before `b` under `rel`.
double mgc_dissimilarity(const PixelBuffer& a, const PixelBuffer& b, Relation rel);

/// Prediction-based L1: extrapolate a's boundary one pixel outward, clamp to
/// [0, 255] and sum absolute differences with b's facing boundary.
double l1_pred_dissimilarity(const PixelBuffer& a, const PixelBuffer& b, Relation rel);

double dissimilarity(Metric metric, const PixelBuffer& a, const PixelBuffer& b, Relation rel);

inline constexpr double kRatioEpsilon = 1e-9;

/// Dense pairwise dissimilarities of a piece set, indexed by rank of piece
/// id (ids ascending), so input order never affects the contents.
class MatchTable {
 public:
  MatchTable() = default;

  /// `lr(i, j)` is D(i left of j), `tb(i, j)` is D(i above j); diagonals are
  /// ignored.
  static MatchTable from_dissimilarities(Metric metric, std::vector<PieceId> ids, Eigen::MatrixXd lr,
                                         Eigen::MatrixXd tb);

  Metric metric() const { return metric_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<PieceId>& ids() const { return ids_; }
  PieceId id(std::size_t index) const { return ids_[index]; }
  std::optional<std::size_t> index_of(PieceId id) const;

  double operator()(std::size_t i, std::size_t j, Relation rel) const { return matrix(rel)(i, j); }
  const Eigen::MatrixXd& matrix(Relation rel) const { return rel == Relation::LeftRight ? lr_ : tb_; }

  /// Smallest / second-smallest D over partners j != i, with i in the given
  /// argument position. +inf when fewer partners exist.
  double best(std::size_t i, Relation rel, Direction dir) const { return best_[slot(rel, dir)](i); }
  double second_best(std::size_t i, Relation rel, Direction dir) const { return second_[slot(rel, dir)](i); }
  /// Partner attaining best(); ties go to the smaller id.
  std::size_t best_partner(std::size_t i, Relation rel, Direction dir) const {
    return partner_[slot(rel, dir)][i];
  }

  /// Partners sorted by ascending D (ties by id), excluding i.
  std::vector<std::size_t> ranked_partners(std::size_t i, Relation rel, Direction dir) const;

 private:
  static std::size_t slot(Relation rel, Direction dir) {
    return static_cast<std::size_t>(rel) * 2 + static_cast<std::size_t>(dir);
  }
  void compute_minima();

  Metric metric_ = Metric::MGC;
  std::vector<PieceId> ids_;
  Eigen::MatrixXd lr_, tb_;
  std::array<Eigen::VectorXd, 4> best_, second_;
  std::array<std::vector<std::size_t>, 4> partner_;
};

/// Exhaustive table over all ordered pairs and both relations; needs at
/// least two pieces.
MatchTable build_match_table(std::span<const Piece> pieces, Metric metric);

struct BuddyPair {
  std::size_t first;
  std::size_t second;
  Relation rel;

  friend bool operator==(const BuddyPair&, const BuddyPair&) = default;
  friend auto operator<=>(const BuddyPair&, const BuddyPair&) = default;
};

/// Mutual best matches: j is i's best forward partner and i is j's best
/// backward partner under the same relation. Sorted.
std::vector<BuddyPair> best_buddies(const MatchTable& table);

/// D(i, j, rel) / (second_best(i, rel, Forward) + eps). Lower is more
/// confident.
double ratio_score(const MatchTable& table, std::size_t i, std::size_t j, Relation rel);

/// Writes `i,j,relation,D` rows keyed by piece id.
void write_match_table_csv(const MatchTable& table, std::ostream& out);

}  // namespace fragmenta
