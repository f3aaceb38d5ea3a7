#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace fragmenta {

/// Minimum-cost assignment of every row to a distinct column of a
/// rectangular cost matrix with rows() <= cols() (Hungarian method with
/// potentials, O(rows^2 * cols)). Returns the column chosen for each row.
/// Rows are inserted in index order and columns scanned in index order, so
/// ties resolve deterministically.
template <typename Derived>
std::vector<int> solve_assignment(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw std::invalid_argument("assignment needs rows <= cols");
  if (n == 0) return {};
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  // 1-based arrays; column 0 is a virtual free column.
  std::vector<Scalar> u(static_cast<std::size_t>(n) + 1, Scalar(0)), v(static_cast<std::size_t>(m) + 1, Scalar(0));
  std::vector<int> owner(static_cast<std::size_t>(m) + 1, 0), way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<Scalar> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = owner[static_cast<std::size_t>(j0)];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (used[uj]) continue;
        const Scalar cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[uj];
        if (cur < minv[uj]) {
          minv[uj] = cur;
          way[uj] = j0;
        }
        if (minv[uj] < delta) {
          delta = minv[uj];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (used[uj]) {
          u[static_cast<std::size_t>(owner[uj])] += delta;
          v[uj] -= delta;
        } else {
          minv[uj] -= delta;
        }
      }
      j0 = j1;
    } while (owner[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      owner[static_cast<std::size_t>(j0)] = owner[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    const int i = owner[static_cast<std::size_t>(j)];
    if (i > 0) result[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return result;
}

}  // namespace fragmenta
