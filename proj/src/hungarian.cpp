#include <cmath>
#include <limits>

#include "d2dcoex/allocation.hpp"
#include "d2dcoex/errors.hpp"

namespace d2dcoex {

// Shortest augmenting path Kuhn-Munkres with row/column potentials, O(n^2 m).
// Rectangular inputs (n <= m) behave as if padded with zero-cost dummy rows.
Assignment hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m)
    throw InfeasibleAssignment("cannot assign " + std::to_string(n) + " pairs to " + std::to_string(m) +
                               " RBs injectively");
  if (!cost.allFinite()) throw DomainError("hungarian: cost matrix must be finite");
  if (n == 0) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows and columns; column 0 is the virtual source of each search.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> row_of_col(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = row_of_col[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {  // strict: the lowest column wins ties
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment a;
  a.rb_of_pair.assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (row_of_col[j] != 0) a.rb_of_pair[row_of_col[j] - 1] = j - 1;
  return a;
}

double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& a) {
  double total = 0.0;
  for (std::size_t j = 0; j < a.rb_of_pair.size(); ++j) total += cost(static_cast<Eigen::Index>(j), a.rb_of_pair[j]);
  return total;
}

}  // namespace d2dcoex
