#include "fragmenta/compatibility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fragmenta {

std::string_view to_string(Relation rel) { return rel == Relation::LeftRight ? "LR" : "TB"; }

std::string_view to_string(Metric metric) { return metric == Metric::MGC ? "mgc" : "l1pred"; }

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "mgc") return Metric::MGC;
  if (text == "l1pred") return Metric::L1Pred;
  return std::nullopt;
}

namespace {

std::pair<EdgeSide, EdgeSide> facing_sides(Relation rel) {
  return rel == Relation::LeftRight ? std::pair{EdgeSide::East, EdgeSide::West}
                                    : std::pair{EdgeSide::South, EdgeSide::North};
}

double mgc_from_strips(const EdgeStrip<double>& a, const EdgeGradientStats<double>& a_stats, const EdgeStrip<double>& b,
                       const EdgeGradientStats<double>& b_stats) {
  return mgc_one_sided(a, a_stats, b) + mgc_one_sided(b, b_stats, a);
}

double l1_from_strips(const EdgeStrip<double>& a, const EdgeStrip<double>& b) {
  const Eigen::Matrix<double, Eigen::Dynamic, 3> predicted = (2.0 * a.outer - a.inner).cwiseMax(0.0).cwiseMin(255.0);
  return (predicted - b.outer).cwiseAbs().sum();
}

void check_pair(const PixelBuffer& a, const PixelBuffer& b) {
  if (a.width != b.width || a.height != b.height || a.width != a.height || a.width < 2) {
    throw std::invalid_argument("pieces must be equal-sized squares of side >= 2");
  }
}

}  // namespace

double mgc_dissimilarity(const PixelBuffer& a, const PixelBuffer& b, Relation rel) {
  check_pair(a, b);
  const auto [side_a, side_b] = facing_sides(rel);
  const auto strip_a = edge_strip(a, side_a);
  const auto strip_b = edge_strip(b, side_b);
  return mgc_from_strips(strip_a, edge_gradient_stats(strip_a), strip_b, edge_gradient_stats(strip_b));
}

double l1_pred_dissimilarity(const PixelBuffer& a, const PixelBuffer& b, Relation rel) {
  check_pair(a, b);
  const auto [side_a, side_b] = facing_sides(rel);
  return l1_from_strips(edge_strip(a, side_a), edge_strip(b, side_b));
}

double dissimilarity(Metric metric, const PixelBuffer& a, const PixelBuffer& b, Relation rel) {
  return metric == Metric::MGC ? mgc_dissimilarity(a, b, rel) : l1_pred_dissimilarity(a, b, rel);
}

MatchTable MatchTable::from_dissimilarities(Metric metric, std::vector<PieceId> ids, Eigen::MatrixXd lr,
                                            Eigen::MatrixXd tb) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (lr.rows() != n || lr.cols() != n || tb.rows() != n || tb.cols() != n) {
    throw std::invalid_argument("dissimilarity matrices must be N x N");
  }
  if (!std::is_sorted(ids.begin(), ids.end()) || std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("match table ids must be strictly ascending");
  }
  MatchTable t;
  t.metric_ = metric;
  t.ids_ = std::move(ids);
  t.lr_ = std::move(lr);
  t.tb_ = std::move(tb);
  t.lr_.diagonal().setConstant(std::numeric_limits<double>::infinity());
  t.tb_.diagonal().setConstant(std::numeric_limits<double>::infinity());
  t.compute_minima();
  return t;
}

void MatchTable::compute_minima() {
  const auto n = ids_.size();
  const double inf = std::numeric_limits<double>::infinity();
  for (auto rel : kAllRelations) {
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      const auto k = slot(rel, dir);
      best_[k] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), inf);
      second_[k] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), inf);
      partner_[k].assign(n, 0);
      const auto& m = matrix(rel);
      for (std::size_t i = 0; i < n; ++i) {
        double b1 = inf, b2 = inf;
        std::size_t arg = i == 0 && n > 1 ? 1 : 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double d = dir == Direction::Forward ? m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                                                     : m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
          if (d < b1) {
            b2 = b1;
            b1 = d;
            arg = j;
          } else if (d < b2) {
            b2 = d;
          }
        }
        best_[k](static_cast<Eigen::Index>(i)) = b1;
        second_[k](static_cast<Eigen::Index>(i)) = b2;
        partner_[k][i] = arg;
      }
    }
  }
}

std::optional<std::size_t> MatchTable::index_of(PieceId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<std::size_t> MatchTable::ranked_partners(std::size_t i, Relation rel, Direction dir) const {
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j != i) order.push_back(j);
  }
  const auto& m = matrix(rel);
  auto d = [&](std::size_t j) {
    return dir == Direction::Forward ? m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                                     : m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d(x) < d(y); });
  return order;
}

MatchTable build_match_table(std::span<const Piece> pieces, Metric metric) {
  if (pieces.size() < 2) throw std::invalid_argument("a match table needs at least two pieces");
  std::vector<const Piece*> sorted;
  for (const auto& p : pieces) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const Piece* a, const Piece* b) { return a->id < b->id; });
  const auto n = static_cast<Eigen::Index>(sorted.size());

  std::vector<PieceId> ids;
  std::vector<std::array<EdgeStrip<double>, 4>> strips;
  std::vector<std::array<EdgeGradientStats<double>, 4>> stats;
  for (const Piece* p : sorted) {
    check_pair(p->pixels, sorted.front()->pixels);
    ids.push_back(p->id);
    std::array<EdgeStrip<double>, 4> st;
    std::array<EdgeGradientStats<double>, 4> gs;
    for (auto side : kAllSides) {
      st[static_cast<std::size_t>(side)] = edge_strip(p->pixels, side);
      if (metric == Metric::MGC) gs[static_cast<std::size_t>(side)] = edge_gradient_stats(st[static_cast<std::size_t>(side)]);
    }
    strips.push_back(std::move(st));
    stats.push_back(gs);
  }

  Eigen::MatrixXd lr(n, n), tb(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      for (auto rel : kAllRelations) {
        const auto [sa, sb] = facing_sides(rel);
        const auto ka = static_cast<std::size_t>(sa), kb = static_cast<std::size_t>(sb);
        const double d = metric == Metric::MGC
                             ? mgc_from_strips(strips[ui][ka], stats[ui][ka], strips[uj][kb], stats[uj][kb])
                             : l1_from_strips(strips[ui][ka], strips[uj][kb]);
        (rel == Relation::LeftRight ? lr : tb)(i, j) = d;
      }
    }
  }
  return MatchTable::from_dissimilarities(metric, std::move(ids), std::move(lr), std::move(tb));
}

std::vector<BuddyPair> best_buddies(const MatchTable& table) {
  std::vector<BuddyPair> out;
  if (table.size() < 2) return out;
  for (auto rel : kAllRelations) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto j = table.best_partner(i, rel, Direction::Forward);
      if (table.best_partner(j, rel, Direction::Backward) == i) out.push_back({i, j, rel});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ratio_score(const MatchTable& table, std::size_t i, std::size_t j, Relation rel) {
  return table(i, j, rel) / (table.second_best(i, rel, Direction::Forward) + kRatioEpsilon);
}

void write_match_table_csv(const MatchTable& table, std::ostream& out) {
  out << "i,j,relation,D\n";
  char buf[64];
  for (auto rel : kAllRelations) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = 0; j < table.size(); ++j) {
        if (i == j) continue;
        auto res = std::to_chars(buf, buf + sizeof buf, table(i, j, rel));
        out << table.id(i) << ',' << table.id(j) << ',' << to_string(rel) << ','
            << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
      }
    }
  }
}

}  // namespace fragmenta
