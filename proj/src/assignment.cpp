#include "barygap/assignment.hpp"

#include <cmath>
#include <limits>

#include "barygap/errors.hpp"

namespace barygap {

Assignment solve_assignment(const std::vector<double>& cost, int n) {
  if (n < 0 || cost.size() != static_cast<std::size_t>(n) * n) {
    throw InputError("assignment: cost matrix must be n x n");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw InputError("assignment: non-finite cost");
  }
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based rows and columns; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int r = 1; r <= n; ++r) {
    row_of[0] = r;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = row_of[j0];
      const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.column_of.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (row_of[j] > 0) out.column_of[row_of[j] - 1] = j - 1;
  }
  for (int r = 0; r < n; ++r) out.cost += cost[static_cast<std::size_t>(r) * n + out.column_of[r]];
  return out;
}

}  // namespace barygap
