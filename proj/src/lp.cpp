#include "barygap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace barygap {

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "?";
}

namespace {

template <class Scalar>
struct Arith;

template <>
struct Arith<double> {
  static constexpr bool kExact = false;
  static double abs(double v) { return std::abs(v); }
  static bool positive(double v, double tol) { return v > tol; }
  static bool negative(double v, double tol) { return v < -tol; }
};

template <>
struct Arith<Rational> {
  static constexpr bool kExact = true;
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static bool positive(const Rational& v, double) { return v > 0; }
  static bool negative(const Rational& v, double) { return v < 0; }
};

}  // namespace

template <class Scalar>
Simplex<Scalar>::Simplex(std::vector<Scalar> rhs, SimplexOptions options)
    : m_(static_cast<int>(rhs.size())), rhs_(std::move(rhs)), row_sign_(m_, 1), options_(options) {
  for (int r = 0; r < m_; ++r) {
    if (rhs_[r] < 0) {
      row_sign_[r] = -1;
      rhs_[r] = -rhs_[r];
    }
  }
  basis_.resize(m_);
  binv_.assign(m_, std::vector<Scalar>(m_, Scalar(0)));
  for (int r = 0; r < m_; ++r) {
    basis_[r] = -(r + 1);
    binv_[r][r] = Scalar(1);
  }
  xb_ = rhs_;
}

template <class Scalar>
int Simplex<Scalar>::add_column(Scalar cost, SparseColumn<Scalar> column) {
  for (auto& [row, value] : column) {
    if (row < 0 || row >= m_) throw std::out_of_range("simplex: row index out of range");
    if (row_sign_[row] < 0) value = -value;
  }
  columns_.push_back({std::move(cost), std::move(column)});
  in_basis_.push_back(0);
  return num_columns() - 1;
}

template <class Scalar>
void Simplex<Scalar>::column_times_binv(int var, std::vector<Scalar>& alpha) const {
  alpha.assign(m_, Scalar(0));
  if (var < 0) {
    int row = -var - 1;
    for (int r = 0; r < m_; ++r) alpha[r] = binv_[r][row];
    return;
  }
  for (const auto& [row, value] : columns_[var].entries) {
    for (int r = 0; r < m_; ++r) alpha[r] += binv_[r][row] * value;
  }
}

template <class Scalar>
Scalar Simplex<Scalar>::basic_cost(int var, bool phase_one) const {
  if (var < 0) return phase_one ? Scalar(1) : Scalar(0);
  return phase_one ? Scalar(0) : columns_[var].cost;
}

template <class Scalar>
void Simplex<Scalar>::refactor() {
  pivots_since_refactor_ = 0;
  if constexpr (Arith<Scalar>::kExact) {
    return;
  } else {
    // Gauss-Jordan with partial pivoting on [B | I].
    std::vector<std::vector<Scalar>> b(m_, std::vector<Scalar>(m_, Scalar(0)));
    for (int c = 0; c < m_; ++c) {
      int var = basis_[c];
      if (var < 0) {
        b[-var - 1][c] = Scalar(1);
      } else {
        for (const auto& [row, value] : columns_[var].entries) b[row][c] = value;
      }
    }
    std::vector<std::vector<Scalar>> inv(m_, std::vector<Scalar>(m_, Scalar(0)));
    for (int r = 0; r < m_; ++r) inv[r][r] = Scalar(1);
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      for (int r = c + 1; r < m_; ++r) {
        if (Arith<Scalar>::abs(b[r][c]) > Arith<Scalar>::abs(b[piv][c])) piv = r;
      }
      if (Arith<Scalar>::abs(b[piv][c]) < 1e-13) throw std::runtime_error("simplex: singular basis");
      std::swap(b[piv], b[c]);
      std::swap(inv[piv], inv[c]);
      Scalar scale = Scalar(1) / b[c][c];
      for (int j = 0; j < m_; ++j) {
        b[c][j] *= scale;
        inv[c][j] *= scale;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c || b[r][c] == Scalar(0)) continue;
        Scalar f = b[r][c];
        for (int j = 0; j < m_; ++j) {
          b[r][j] -= f * b[c][j];
          inv[r][j] -= f * inv[c][j];
        }
      }
    }
    binv_ = std::move(inv);
    for (int r = 0; r < m_; ++r) {
      Scalar acc(0);
      for (int j = 0; j < m_; ++j) acc += binv_[r][j] * rhs_[j];
      xb_[r] = acc < 0 && acc > -options_.tolerance ? Scalar(0) : acc;
    }
  }
}

template <class Scalar>
LpStatus Simplex<Scalar>::run(bool phase_one) {
  const double tol = options_.tolerance;
  double cost_scale = 1.0;
  if constexpr (!Arith<Scalar>::kExact) {
    if (!phase_one) {
      for (const auto& c : columns_) cost_scale = std::max(cost_scale, std::abs(c.cost));
    }
  }
  const double dj_tol = tol * cost_scale;
  std::vector<Scalar> y(m_), alpha(m_);
  int degenerate_run = 0;
  while (true) {
    if (iterations_ - solve_start_ >= options_.max_iterations) return LpStatus::kIterationLimit;
    if (!Arith<Scalar>::kExact && pivots_since_refactor_ >= options_.refactor_interval) refactor();

    for (int i = 0; i < m_; ++i) {
      Scalar acc(0);
      for (int r = 0; r < m_; ++r) {
        const Scalar cb = basic_cost(basis_[r], phase_one);
        if (cb != Scalar(0)) acc += cb * binv_[r][i];
      }
      y[i] = acc;
    }

    const bool bland =
        options_.pricing == PricingRule::kBland || degenerate_run >= options_.degenerate_run_before_bland;
    int entering = -1;
    Scalar best(0);
    for (int j = 0; j < num_columns(); ++j) {
      if (in_basis_[j]) continue;
      Scalar d = phase_one ? Scalar(0) : columns_[j].cost;
      for (const auto& [row, value] : columns_[j].entries) d -= y[row] * value;
      if (!Arith<Scalar>::negative(d, dj_tol)) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (entering < 0 || d < best) {
        entering = j;
        best = d;
      }
    }
    if (entering < 0) return LpStatus::kOptimal;

    column_times_binv(entering, alpha);
    int leave = -1;
    Scalar best_ratio(0);
    if (!phase_one) {
      // Artificials are pinned at zero in phase two; a nonzero pivot entry forces them out.
      for (int r = 0; r < m_ && leave < 0; ++r) {
        if (basis_[r] < 0 && Arith<Scalar>::positive(Arith<Scalar>::abs(alpha[r]), tol)) leave = r;
      }
    }
    auto var_order = [&](int var) { return var < 0 ? num_columns() + (-var - 1) : var; };
    auto eligible = [&](int r) { return (phase_one || basis_[r] >= 0) && Arith<Scalar>::positive(alpha[r], tol); };
    auto ratio_of = [&](int r) { return (xb_[r] > Scalar(0) ? xb_[r] : Scalar(0)) / alpha[r]; };
    if (leave < 0) {
      // Two passes: ratios within tol of the minimum tie, so noise cannot defeat the tie rule.
      bool have = false;
      Scalar min_ratio(0);
      for (int r = 0; r < m_; ++r) {
        if (!eligible(r)) continue;
        const Scalar ratio = ratio_of(r);
        if (!have || ratio < min_ratio) min_ratio = ratio;
        have = true;
      }
      if (!have) return LpStatus::kUnbounded;
      Scalar band = min_ratio;
      if constexpr (!Arith<Scalar>::kExact) band += tol;
      for (int r = 0; r < m_; ++r) {
        if (!eligible(r) || ratio_of(r) > band) continue;
        bool take = leave < 0 || (bland ? var_order(basis_[r]) < var_order(basis_[leave])
                                        : Arith<Scalar>::abs(alpha[r]) > Arith<Scalar>::abs(alpha[leave]));
        if (take) leave = r;
      }
      best_ratio = ratio_of(leave);
    }

    const Scalar theta = best_ratio;
    const bool degenerate = !Arith<Scalar>::positive(theta, tol);
    degenerate_run = degenerate ? degenerate_run + 1 : 0;
    for (int r = 0; r < m_; ++r) {
      if (r == leave) continue;
      if (alpha[r] != Scalar(0)) xb_[r] -= theta * alpha[r];
      if constexpr (!Arith<Scalar>::kExact) {
        if (xb_[r] < 0 && xb_[r] > -tol) xb_[r] = 0;
      }
    }
    xb_[leave] = theta;

    const Scalar inv_piv = Scalar(1) / alpha[leave];
    for (int j = 0; j < m_; ++j) binv_[leave][j] *= inv_piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || alpha[r] == Scalar(0)) continue;
      const Scalar f = alpha[r];
      for (int j = 0; j < m_; ++j) binv_[r][j] -= f * binv_[leave][j];
    }
    if (basis_[leave] >= 0) in_basis_[basis_[leave]] = 0;
    basis_[leave] = entering;
    in_basis_[entering] = 1;
    ++iterations_;
    ++pivots_since_refactor_;
  }
}

template <class Scalar>
LpSolution<Scalar> Simplex<Scalar>::solve() {
  LpSolution<Scalar> sol;
  solve_start_ = iterations_;
  if (!feasible_basis_) {
    LpStatus st = run(true);
    if (st != LpStatus::kOptimal) {
      sol.status = st;
      sol.iterations = iterations_;
      return sol;
    }
    if (!Arith<Scalar>::kExact) refactor();
    Scalar infeasibility(0);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < 0) infeasibility += xb_[r];
    }
    double infeasibility_tol = 0;
    if constexpr (!Arith<Scalar>::kExact) {
      double rhs_scale = 1;
      for (double v : rhs_) rhs_scale = std::max(rhs_scale, v);
      infeasibility_tol = options_.tolerance * 10 * rhs_scale;
    }
    if (Arith<Scalar>::positive(infeasibility, infeasibility_tol)) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    feasible_basis_ = true;
  }
  sol.status = run(false);
  if (!Arith<Scalar>::kExact) refactor();
  sol.iterations = iterations_;
  sol.x.assign(num_columns(), Scalar(0));
  for (int r = 0; r < m_; ++r) {
    if (basis_[r] >= 0) sol.x[basis_[r]] = xb_[r];
  }
  sol.objective = Scalar(0);
  for (int j = 0; j < num_columns(); ++j) {
    if (sol.x[j] != Scalar(0)) sol.objective += columns_[j].cost * sol.x[j];
  }
  sol.duals.assign(m_, Scalar(0));
  for (int i = 0; i < m_; ++i) {
    Scalar acc(0);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] >= 0) acc += columns_[basis_[r]].cost * binv_[r][i];
    }
    sol.duals[i] = row_sign_[i] < 0 ? Scalar(-acc) : acc;
  }
  return sol;
}

template <class Scalar>
LpSolution<Scalar> solve_lp(const std::vector<Scalar>& rhs, const std::vector<Scalar>& costs,
                            const std::vector<SparseColumn<Scalar>>& columns, SimplexOptions options) {
  if (costs.size() != columns.size()) throw std::invalid_argument("solve_lp: size mismatch");
  Simplex<Scalar> lp(rhs, options);
  for (std::size_t j = 0; j < columns.size(); ++j) lp.add_column(costs[j], columns[j]);
  return lp.solve();
}

template class Simplex<double>;
template class Simplex<Rational>;
template LpSolution<double> solve_lp(const std::vector<double>&, const std::vector<double>&,
                                     const std::vector<SparseColumn<double>>&, SimplexOptions);
template LpSolution<Rational> solve_lp(const std::vector<Rational>&, const std::vector<Rational>&,
                                       const std::vector<SparseColumn<Rational>>&, SimplexOptions);

}  // namespace barygap
