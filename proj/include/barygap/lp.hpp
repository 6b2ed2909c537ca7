#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "barygap/rational.hpp"

namespace barygap {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* lp_status_name(LpStatus s);

enum class PricingRule {
  // Most negative reduced cost; falls back to Bland after a run of degenerate pivots.
  kDantzigWithBland,
  kBland,
};

struct SimplexOptions {
  // Pivot budget per solve() call.
  long max_iterations = 2'000'000;
  PricingRule pricing = PricingRule::kDantzigWithBland;
  int degenerate_run_before_bland = 50;
  // Floating point only: rebuild the basis inverse every this many pivots.
  int refactor_interval = 100;
  // Floating point only: pivot tolerance, and optimality tolerance relative to max |cost|.
  double tolerance = 1e-9;
};

template <class Scalar>
using SparseColumn = std::vector<std::pair<int, Scalar>>;

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Scalar objective{};
  std::vector<Scalar> x;      // one entry per structural column
  std::vector<Scalar> duals;  // one per row; reduced cost c_j - duals^T A_j >= 0 at optimum
  long iterations = 0;
};

// Revised simplex for min c^T x subject to A x = b, x >= 0, with a dense basis
// inverse and sparse columns. Columns may be appended between solves and the
// current basis is kept, so column generation restarts warm.
template <class Scalar>
class Simplex {
 public:
  explicit Simplex(std::vector<Scalar> rhs, SimplexOptions options = {});

  int num_rows() const { return m_; }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  int add_column(Scalar cost, SparseColumn<Scalar> column);

  LpSolution<Scalar> solve();

 private:
  struct Column {
    Scalar cost;
    SparseColumn<Scalar> entries;  // rows already sign-normalized
  };

  void refactor();
  void column_times_binv(int var, std::vector<Scalar>& alpha) const;
  Scalar basic_cost(int var, bool phase_one) const;
  LpStatus run(bool phase_one);

  int m_;
  std::vector<Scalar> rhs_;
  std::vector<std::int8_t> row_sign_;
  std::vector<Column> columns_;
  std::vector<char> in_basis_;
  // Entry >= 0 is a structural column; entry -(r + 1) is the artificial of row r.
  std::vector<int> basis_;
  std::vector<std::vector<Scalar>> binv_;
  std::vector<Scalar> xb_;
  SimplexOptions options_;
  bool feasible_basis_ = false;
  long iterations_ = 0;
  long solve_start_ = 0;
  int pivots_since_refactor_ = 0;
};

template <class Scalar>
LpSolution<Scalar> solve_lp(const std::vector<Scalar>& rhs, const std::vector<Scalar>& costs,
                            const std::vector<SparseColumn<Scalar>>& columns, SimplexOptions options = {});

}  // namespace barygap
