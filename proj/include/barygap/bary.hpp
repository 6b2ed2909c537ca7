#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barygap/fpq.hpp"
#include "barygap/graph.hpp"
#include "barygap/tuple_costs.hpp"

namespace barygap {

inline constexpr std::uint64_t kDefaultLpCap = 100'000;

struct DiscreteMeasure {
  std::vector<std::vector<double>> atoms;
  std::vector<double> masses;

  std::size_t size() const { return atoms.size(); }
  std::size_t dimension() const { return atoms.empty() ? 0 : atoms[0].size(); }
  // Masses nonnegative summing to 1 within 1e-12, finite atoms of one
  // dimension, pairwise distinct.
  void validate() const;
};

struct BaryInstance {
  std::vector<DiscreteMeasure> measures;
  std::vector<double> weights;  // empty means uniform 1/k
  double p = 2;
  double q = 2;

  int k() const { return static_cast<int>(measures.size()); }
  std::vector<double> lambda() const;
  void validate() const;
};

// Sparse k-way plan; entries sorted by tuple.
struct TransportTensor {
  std::vector<int> shape;
  std::vector<std::pair<VertexTuple, double>> entries;

  std::vector<std::vector<double>> marginals() const;
  // Largest |m_i(P)_j - mu_i_j| over all i, j.
  double marginal_violation(const BaryInstance& inst) const;
};

// ||x - y||_q^p.
double lq_pow(std::span<const double> x, std::span<const double> y, double p, double q);

// Optimal transport cost min E||X - Y||_q^p (the p-th power of W_{p,q}).
double transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double q);
double wasserstein_pq(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double q);

// Costs C_j = min_y sum_i lambda_i ||x_{i, j_i} - y||_q^p for every tuple,
// solved once per tuple class and cached.
class CostOracle {
 public:
  CostOracle(const BaryInstance& inst, const FpqOptions& opts, std::uint64_t cap, int threads = 1);

  const TupleCosts& tuples() const { return *costs_; }
  double cost(std::span<const int> tuple) const { return by_key(costs_->key(tuple)); }
  double by_key(std::uint64_t key) const;
  // Certified solve at a tuple, including the minimizer.
  FpqSolution solve(std::span<const int> tuple) const;
  double max_modulus() const { return max_cost_; }
  double min_cost() const { return min_cost_; }
  // Largest value - lower_bound over all cached costs.
  double max_error() const { return max_error_; }
  std::size_t distinct() const { return distinct_; }

 private:
  std::unique_ptr<TupleCosts> costs_;
  FpqOptions opts_;
  bool flat_ = true;
  std::vector<double> flat_costs_;
  std::unordered_map<std::uint64_t, double> hashed_costs_;
  double max_cost_ = 0;
  double min_cost_ = 0;
  double max_error_ = 0;
  std::size_t distinct_ = 0;
};

struct MotOptions {
  // Additive error budget; tuple costs are solved to tol / 2.
  double tol = 1e-6;
  std::uint64_t cap = kDefaultLpCap;
  int threads = 1;
  // Put every tuple into one LP instead of generating columns (small instances only).
  bool full_lp = false;
  // Columns added per pricing round; 0 means twice the row count.
  int batch = 0;
  long max_rounds = 100'000;
};

struct MotResult {
  double value = 0;        // <C, P> of the returned plan
  double lower_bound = 0;  // certified lower bound on the barycenter value
  TransportTensor plan;
  std::string method;  // "column-generation", "full-lp", "assignment"
  long rounds = 0;
  std::size_t columns = 0;
  std::uint64_t tuples = 0;
  std::size_t distinct_costs = 0;
};

MotResult bary_value_mot(const BaryInstance& inst, const MotOptions& opts = {});

// Pushforward of the plan under the per-tuple minimizer; identical atoms merged.
DiscreteMeasure extract_barycenter(const TransportTensor& plan, const BaryInstance& inst, double tol = 1e-9);
// sum_i lambda_i W_{p,q}^p(mu_i, nu).
double barycenter_objective(const BaryInstance& inst, const DiscreteMeasure& nu);

struct BorgwardtResult {
  double value = 0;
  DiscreteMeasure nu;
};

// Best nu supported on the union of the input supports; one joint LP over the
// weights and the k transport plans.
BorgwardtResult borgwardt_2approx(const BaryInstance& inst, std::uint64_t cap = kDefaultLpCap);

// Atoms per output measure for a target accuracy: ceil(4 n p 2^p / eps).
int uniform_atom_count(int n, double p, double eps);

// Every measure becomes uniform on N atoms: masses rounded to multiples of 1/N
// by largest remainder, then each atom split into copies shrunk toward the
// origin by at most eps / (p 2^p) in l_q (an atom at the origin is split along
// coordinate axes instead). Input atoms must lie in the unit l_q ball.
BaryInstance uniformize(const BaryInstance& inst, double eps, std::optional<int> atoms = std::nullopt);

}  // namespace barygap
