#include "fragmenta/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace fragmenta {

std::vector<MatchConstraint> build_lp_constraints(const MatchTable& table, std::size_t top_k) {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  std::map<std::tuple<std::size_t, std::size_t, int>, double> best_weight;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (auto rel : kAllRelations) {
      for (auto dir : {Direction::Forward, Direction::Backward}) {
        const double second = table.second_best(i, rel, dir);
        auto partners = table.ranked_partners(i, rel, dir);
        if (partners.size() > top_k) partners.resize(top_k);
        for (auto j : partners) {
          const auto [first, last] = dir == Direction::Forward ? std::pair{i, j} : std::pair{j, i};
          const double w = std::min(second / (table(first, last, rel) + kRatioEpsilon), kMaxConstraintWeight);
          auto [it, inserted] = best_weight.try_emplace({first, last, static_cast<int>(rel)}, w);
          if (!inserted) it->second = std::max(it->second, w);
        }
      }
    }
  }
  std::vector<MatchConstraint> out;
  out.reserve(best_weight.size());
  for (const auto& [k, w] : best_weight) {
    const auto rel = static_cast<Relation>(std::get<2>(k));
    out.push_back({std::get<0>(k), std::get<1>(k),
                   rel == Relation::LeftRight ? GridOffset{0, 1} : GridOffset{1, 0}, w, true});
  }
  return out;
}

double axis_objective(std::span<const MatchConstraint> constraints, std::span<const double> coords, Axis axis) {
  double total = 0.0;
  for (const auto& c : constraints) {
    if (!c.active) continue;
    total += c.weight * std::abs(coords[c.second] - coords[c.first] - c.offset(axis));
  }
  return total;
}

namespace {

// One constraint as a bidirectional arc with flow f in [-w, w]:
// residual first->second has capacity w - f at cost +delta,
// residual second->first has capacity w + f at cost -delta.
struct Arc {
  std::size_t first, second;
  double cost;
  double weight;
  double flow;
};

struct Residual {
  std::size_t arc;
  bool forward;
};

}  // namespace

AxisSolution solve_lp_axis(std::span<const MatchConstraint> constraints, std::size_t n_pieces, Axis axis) {
  AxisSolution sol;
  sol.coords.assign(n_pieces, 0.0);

  std::vector<Arc> arcs;
  double scale = 0.0;
  for (const auto& c : constraints) {
    if (!c.active) continue;
    if (c.first >= n_pieces || c.second >= n_pieces) throw std::out_of_range("constraint references unknown piece");
    if (!(c.weight >= 0.0)) throw std::invalid_argument("constraint weight must be nonnegative");
    if (c.first == c.second || c.weight == 0.0) continue;
    arcs.push_back({c.first, c.second, c.offset(axis), c.weight, 0.0});
    scale = std::max(scale, c.weight);
  }
  if (arcs.empty()) {
    sol.degenerate = true;
    return sol;
  }
  const double tol = 1e-12 * std::max(1.0, scale) * static_cast<double>(arcs.size());

  std::vector<std::vector<Residual>> adj(n_pieces);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    adj[arcs[a].first].push_back({a, true});
    adj[arcs[a].second].push_back({a, false});
  }
  auto capacity = [&](const Residual& r) {
    const Arc& a = arcs[r.arc];
    return r.forward ? a.weight - a.flow : a.weight + a.flow;
  };
  auto cost = [&](const Residual& r) { return r.forward ? arcs[r.arc].cost : -arcs[r.arc].cost; };
  auto head = [&](const Residual& r) { return r.forward ? arcs[r.arc].second : arcs[r.arc].first; };

  // Saturate every negative-cost residual arc so that all remaining residual
  // costs are nonnegative; the resulting imbalances are then routed back
  // along shortest paths.
  std::vector<double> excess(n_pieces, 0.0);
  for (auto& a : arcs) {
    if (a.cost > 0) a.flow = -a.weight;
    else if (a.cost < 0) a.flow = a.weight;
    excess[a.first] -= a.flow;
    excess[a.second] += a.flow;
  }

  std::vector<double> potential(n_pieces, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n_pieces);
  std::vector<Residual> via(n_pieces);
  std::vector<std::size_t> origin(n_pieces);
  for (;;) {
    for (auto& e : excess) {
      if (std::abs(e) <= tol) e = 0.0;
    }
    std::fill(dist.begin(), dist.end(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::size_t v = 0; v < n_pieces; ++v) {
      if (excess[v] > 0) {
        dist[v] = 0.0;
        origin[v] = v;
        queue.push({0.0, v});
      }
    }
    if (queue.empty()) break;
    std::size_t target = n_pieces;
    std::vector<bool> done(n_pieces, false);
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (done[u]) continue;
      done[u] = true;
      if (excess[u] < 0) {
        target = u;
        break;
      }
      for (const auto& r : adj[u]) {
        if (capacity(r) <= tol) continue;
        const std::size_t v = head(r);
        const double reduced = std::max(0.0, cost(r) + potential[u] - potential[v]);
        if (d + reduced < dist[v]) {
          dist[v] = d + reduced;
          via[v] = r;
          origin[v] = origin[u];
          queue.push({dist[v], v});
        }
      }
    }
    if (target == n_pieces) {
      throw std::logic_error("lp axis: unbalanced residual network");
    }
    const double limit = dist[target];
    for (std::size_t v = 0; v < n_pieces; ++v) potential[v] += std::min(dist[v], limit);

    const std::size_t source = origin[target];
    double amount = std::min(excess[source], -excess[target]);
    for (std::size_t v = target; v != source;) {
      const Residual& r = via[v];
      amount = std::min(amount, capacity(r));
      v = r.forward ? arcs[r.arc].first : arcs[r.arc].second;
    }
    for (std::size_t v = target; v != source;) {
      const Residual& r = via[v];
      Arc& a = arcs[r.arc];
      a.flow += r.forward ? amount : -amount;
      v = r.forward ? a.first : a.second;
    }
    excess[source] -= amount;
    excess[target] += amount;
  }

  // Reduced costs are nonnegative on every residual arc, i.e.
  // potential[head] <= potential[tail] + cost, which is exactly complementary
  // slackness for coordinates x = potential.
  std::vector<std::size_t> component(n_pieces);
  std::iota(component.begin(), component.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return component[v] == v ? v : component[v] = root(component[v]);
  };
  for (const auto& a : arcs) {
    std::size_t x = root(a.first), y = root(a.second);
    if (x != y) component[std::max(x, y)] = std::min(x, y);
  }
  for (std::size_t v = 0; v < n_pieces; ++v) {
    sol.coords[v] = potential[v] - potential[root(v)];
    if (sol.coords[v] == 0.0) sol.coords[v] = 0.0;  // no negative zero
  }
  sol.objective = axis_objective(constraints, sol.coords, axis);
  return sol;
}

}  // namespace fragmenta
