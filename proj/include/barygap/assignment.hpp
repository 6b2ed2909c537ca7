#pragma once

#include <vector>

namespace barygap {

struct Assignment {
  double cost = 0;
  std::vector<int> column_of;  // row r is matched to column column_of[r]
};

// Minimum-cost perfect matching on a dense square cost matrix (row-major),
// shortest augmenting paths with potentials, O(n^3).
Assignment solve_assignment(const std::vector<double>& cost, int n);

}  // namespace barygap
