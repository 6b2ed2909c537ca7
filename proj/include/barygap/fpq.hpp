#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barygap/embed.hpp"
#include "barygap/rational.hpp"

namespace barygap {

enum class FpqMethod {
  kAuto,
  kTrivial,       // k = 1 or all points coincide
  kClosedForm22,  // weighted mean
  kCoordinateQ1,  // p = q = 1, per-coordinate weighted median
  kWeiszfeld,     // p = 1, q = 2
  kQuasiNewton,   // q in (1, inf), L-BFGS
  kSimplicialQ1,  // q = 1, p > 1, away-step Frank-Wolfe over radius vectors
  kPairwiseQInf,  // q = inf, radius vectors constrained by pairwise distances
  kSubgradient,   // any (p, q); projected subgradient on the bounding box
};

std::string method_name(FpqMethod m);
FpqMethod parse_method(const std::string& name);

// min_y sum_i w_i ||z_i - y||_q^p. Empty weights mean all ones.
struct FpqProblem {
  std::vector<std::vector<double>> points;
  double p = 2;
  double q = 2;
  std::vector<double> weights;
};

struct FpqOptions {
  // Absolute target for upper - lower. Values near the double rounding floor
  // are relaxed to a relative 1e-12 of the value.
  double tol = 1e-9;
  long max_iterations = 100'000;
  FpqMethod method = FpqMethod::kAuto;
  // When false, an uncertified result is returned instead of throwing.
  bool require_certificate = true;
};

struct FpqSolution {
  double value = 0;        // objective at minimizer (an upper bound)
  double lower_bound = 0;  // certified lower bound on the optimum
  std::vector<double> minimizer;
  double tolerance = 0;  // value - lower_bound
  FpqMethod method = FpqMethod::kAuto;
  long iterations = 0;
  bool certified = false;
};

FpqSolution solve_fpq(const FpqProblem& prob, const FpqOptions& opts = {});

// The same problem given by distinct coordinate columns: column c holds the k
// values values[c*k .. c*k + k) and stands for multiplicity[c] identical
// coordinates. The minimizer has one entry per column.
struct ColumnProblem {
  int k = 0;
  double p = 2;
  double q = 2;
  std::vector<double> weights;
  std::vector<double> values;
  std::vector<double> multiplicity;

  int num_columns() const { return static_cast<int>(multiplicity.size()); }
};

FpqSolution solve_fpq_columns(const ColumnProblem& prob, const FpqOptions& opts = {});
// Groups identical columns of a dense problem. Constant columns stay; the
// solver pins them.
ColumnProblem compress_columns(const FpqProblem& prob);

double fpq_objective(const FpqProblem& prob, std::span<const double> y);
// Gradient of the objective; for p = 1 at a data point the term of that point is dropped.
std::vector<double> fpq_gradient(const FpqProblem& prob, std::span<const double> y);
// Certified lower bound on the optimum, built from the dual information at y.
double fpq_lower_bound(const FpqProblem& prob, std::span<const double> y);

struct ClosedForm22 {
  FpqSolution solution;
  // Exact value when every coordinate is an integer (weights must be unit).
  std::optional<Rational> exact_value;
};

// p = q = 2, unit weights: (1 - 1/k) sum ||x_i||^2 - (2/k) sum_{i<i'} <x_i, x_i'>.
ClosedForm22 fpq_closed_form_22(const std::vector<std::vector<double>>& points);
// Same value in exact arithmetic for integer points given sparsely.
Rational closed_form_22_exact(std::span<const SparsePoint* const> points);

// k^{1-p} (n k (k-1)(n k - 2n + 2) - 4t)^p.
double q1_value_formula(int n, int k, int t, double p);
// Integer witness: s on coordinates (l, v_l, l2, v_l2, s), zero elsewhere.
std::vector<int> q1_clique_witness(const PointConfig& config, std::span<const int> tuple);
// -1/2 where some tuple point is -1, else +1/2.
std::vector<double> qinf_clique_witness(const PointConfig& config, std::span<const int> tuple);

// Dense points of a tuple: group i contributes point (i, tuple[i]).
std::vector<std::vector<double>> tuple_points(const PointConfig& config, std::span<const int> tuple);

}  // namespace barygap
