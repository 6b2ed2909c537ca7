#include "barygap/bary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <thread>
#include <unordered_set>

#include "barygap/assignment.hpp"
#include "barygap/errors.hpp"
#include "barygap/lp.hpp"

namespace barygap {

namespace {

constexpr std::uint64_t kFlatCostRange = std::uint64_t{1} << 26;

bool is_inf(double q) { return std::isinf(q); }

double lq_norm(std::span<const double> x, double q) {
  double acc = 0;
  for (double v : x) acc = is_inf(q) ? std::max(acc, std::abs(v)) : acc + std::pow(std::abs(v), q);
  return is_inf(q) ? acc : std::pow(acc, 1 / q);
}

PointGroups atom_groups(const BaryInstance& inst) {
  PointGroups g;
  for (const auto& m : inst.measures) g.push_back(m.atoms);
  return g;
}

// Weighted p = q = 2 value: sum l_i ||x_i||^2 - ||sum l_i x_i||^2 / sum l_i.
double weighted_value_22(const PointGroups& g, std::span<const int> tuple, const std::vector<double>& lam,
                         std::vector<double>& mean) {
  const std::size_t d = g[0][0].size();
  mean.assign(d, 0.0);
  double total = 0, sq = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& x = g[i][tuple[i]];
    total += lam[i];
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += lam[i] * x[j];
      sq += lam[i] * x[j] * x[j];
    }
  }
  double mm = 0;
  for (double& v : mean) {
    mm += v * v;
    v /= total;
  }
  return std::max(0.0, sq - mm / total);
}

struct RowMap {
  std::vector<int> offset;  // row of (i, a) is offset[i] + a unless it is the dropped last atom
  std::vector<int> size;
  int rows = 0;

  explicit RowMap(const BaryInstance& inst) {
    for (int i = 0; i < inst.k(); ++i) {
      offset.push_back(rows);
      size.push_back(static_cast<int>(inst.measures[i].size()));
      rows += size.back() - (i == 0 ? 0 : 1);
    }
  }
  int row(int i, int a) const { return (i > 0 && a == size[i] - 1) ? -1 : offset[i] + a; }
};

SparseColumn<double> tuple_column(const RowMap& rm, std::span<const int> t) {
  SparseColumn<double> col;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int r = rm.row(static_cast<int>(i), t[i]);
    if (r >= 0) col.emplace_back(r, 1.0);
  }
  return col;
}

std::uint64_t tuple_index(const BaryInstance& inst, std::span<const int> t) {
  std::uint64_t idx = 0;
  for (int i = 0; i < inst.k(); ++i) idx = idx * inst.measures[i].size() + t[i];
  return idx;
}

// Greedy corner rule; at most sum n_i - k + 1 tuples and a feasible plan when
// the masses are consistent.
std::vector<VertexTuple> corner_tuples(const BaryInstance& inst) {
  const int k = inst.k();
  std::vector<std::vector<double>> rem;
  for (const auto& m : inst.measures) rem.push_back(m.masses);
  VertexTuple a(k, 0);
  std::vector<VertexTuple> out;
  while (true) {
    double m = rem[0][a[0]];
    int arg = 0;
    for (int i = 1; i < k; ++i) {
      if (rem[i][a[i]] < m) {
        m = rem[i][a[i]];
        arg = i;
      }
    }
    out.push_back(a);
    for (int i = 0; i < k; ++i) rem[i][a[i]] -= m;
    bool done = false;
    for (int i = 0; i < k; ++i) {
      if (i == arg || rem[i][a[i]] <= 1e-15) {
        if (++a[i] == static_cast<int>(rem[i].size())) done = true;
      }
    }
    if (done) return out;
  }
}

TransportTensor make_plan(const BaryInstance& inst, std::vector<std::pair<VertexTuple, double>> entries) {
  TransportTensor plan;
  for (const auto& m : inst.measures) plan.shape.push_back(static_cast<int>(m.size()));
  std::sort(entries.begin(), entries.end());
  plan.entries = std::move(entries);
  return plan;
}

class Pricer {
 public:
  Pricer(const CostOracle& oracle, const std::vector<std::vector<double>>& duals, int batch, double threshold)
      : oracle_(oracle), costs_(oracle.tuples()), duals_(duals), batch_(batch), threshold_(threshold) {
    const int k = costs_.k();
    suffix_max_.assign(k + 1, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      suffix_max_[i] = suffix_max_[i + 1] + *std::max_element(duals[i].begin(), duals[i].end());
    }
    t_.assign(k, 0);
  }

  // (reduced cost, tuple) pairs below the threshold, most negative first.
  std::vector<std::pair<double, VertexTuple>> run() {
    dfs(0, 0, 0.0);
    std::vector<std::pair<double, VertexTuple>> out;
    while (!heap_.empty()) {
      out.push_back(heap_.top());
      heap_.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
  // Lower bound on every reduced cost, pruned subtrees included.
  double min_reduced() const { return min_rc_; }

 private:
  double cutoff() const { return static_cast<int>(heap_.size()) < batch_ ? threshold_ : heap_.top().first; }

  void dfs(int i, std::uint64_t key, double dsum) {
    const int k = costs_.k();
    if (i == k) {
      const double rc = oracle_.by_key(key) - dsum;
      min_rc_ = std::min(min_rc_, rc);
      if (rc < cutoff()) {
        heap_.emplace(rc, t_);
        if (static_cast<int>(heap_.size()) > batch_) heap_.pop();
      }
      return;
    }
    const double bound = oracle_.min_cost() - dsum - suffix_max_[i];
    if (bound >= cutoff()) {
      min_rc_ = std::min(min_rc_, bound);
      return;
    }
    const int n = costs_.size(i);
    for (int a = 0; a < n; ++a) {
      t_[i] = a;
      dfs(i + 1, key + costs_.step(i, t_.data(), a), dsum + duals_[i][a]);
    }
  }

  const CostOracle& oracle_;
  const TupleCosts& costs_;
  const std::vector<std::vector<double>>& duals_;
  int batch_;
  double threshold_;
  std::vector<double> suffix_max_;
  VertexTuple t_;
  double min_rc_ = std::numeric_limits<double>::infinity();
  std::priority_queue<std::pair<double, VertexTuple>> heap_;
};

}  // namespace

void DiscreteMeasure::validate() const {
  if (atoms.empty()) throw InputError("measure: needs at least one atom");
  if (atoms.size() != masses.size()) throw InputError("measure: atoms and masses differ in length");
  const std::size_t d = atoms[0].size();
  double total = 0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].size() != d) throw InputError("measure: atoms differ in dimension");
    for (double v : atoms[j]) {
      if (!std::isfinite(v)) throw InputError("measure: non-finite atom coordinate");
    }
    if (!(masses[j] >= 0) || !std::isfinite(masses[j])) throw InputError("measure: masses must be >= 0");
    total += masses[j];
  }
  if (std::abs(total - 1) > 1e-12) {
    throw InputError("measure: masses sum to " + std::to_string(total) + ", expected 1");
  }
  std::set<std::vector<double>> seen(atoms.begin(), atoms.end());
  if (seen.size() != atoms.size()) throw InputError("measure: atoms must be pairwise distinct");
}

std::vector<double> BaryInstance::lambda() const {
  if (weights.empty()) return std::vector<double>(k(), 1.0 / k());
  return weights;
}

void BaryInstance::validate() const {
  if (measures.empty()) throw InputError("instance: needs at least one measure");
  regime_for(p, q);
  const std::size_t d = measures[0].dimension();
  for (const auto& m : measures) {
    m.validate();
    if (m.dimension() != d) throw InputError("instance: measures differ in dimension");
  }
  if (!weights.empty()) {
    if (static_cast<int>(weights.size()) != k()) throw InputError("instance: one weight per measure");
    double total = 0;
    for (double w : weights) {
      if (!(w >= 0) || !std::isfinite(w)) throw InputError("instance: weights must be >= 0");
      total += w;
    }
    if (std::abs(total - 1) > 1e-12) throw InputError("instance: weights must sum to 1");
  }
}

std::vector<std::vector<double>> TransportTensor::marginals() const {
  std::vector<std::vector<double>> m;
  for (int s : shape) m.emplace_back(s, 0.0);
  for (const auto& [t, mass] : entries) {
    for (std::size_t i = 0; i < shape.size(); ++i) m[i][t[i]] += mass;
  }
  return m;
}

double TransportTensor::marginal_violation(const BaryInstance& inst) const {
  const auto m = marginals();
  double worst = 0;
  for (int i = 0; i < inst.k(); ++i) {
    for (std::size_t j = 0; j < inst.measures[i].size(); ++j) {
      worst = std::max(worst, std::abs(m[i][j] - inst.measures[i].masses[j]));
    }
  }
  for (const auto& [t, mass] : entries) worst = std::max(worst, -mass);
  return worst;
}

double lq_pow(std::span<const double> x, std::span<const double> y, double p, double q) {
  if (x.size() != y.size()) throw InputError("lq_pow: dimension mismatch");
  double acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = std::abs(x[j] - y[j]);
    acc = is_inf(q) ? std::max(acc, diff) : acc + std::pow(diff, q);
  }
  const double norm = is_inf(q) ? acc : std::pow(acc, 1 / q);
  return std::pow(norm, p);
}

double transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double q) {
  if (mu.dimension() != nu.dimension()) throw InputError("transport: dimension mismatch");
  const int a = static_cast<int>(mu.size()), b = static_cast<int>(nu.size());
  if (a == 1 || b == 1) {
    double total = 0;
    for (int i = 0; i < a; ++i) {
      for (int j = 0; j < b; ++j) total += mu.masses[i] * nu.masses[j] * lq_pow(mu.atoms[i], nu.atoms[j], p, q);
    }
    return total;
  }
  std::vector<double> rhs(mu.masses);
  rhs.insert(rhs.end(), nu.masses.begin(), nu.masses.end() - 1);
  std::vector<double> costs;
  std::vector<SparseColumn<double>> cols;
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      costs.push_back(lq_pow(mu.atoms[i], nu.atoms[j], p, q));
      SparseColumn<double> col{{i, 1.0}};
      if (j < b - 1) col.emplace_back(a + j, 1.0);
      cols.push_back(std::move(col));
    }
  }
  auto sol = solve_lp(rhs, costs, cols);
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("transport LP: ") + lp_status_name(sol.status), 0, 0);
  }
  return std::max(0.0, sol.objective);
}

double wasserstein_pq(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double q) {
  regime_for(p, q);
  return std::pow(transport_cost(mu, nu, p, q), 1 / p);
}

CostOracle::CostOracle(const BaryInstance& inst, const FpqOptions& opts, std::uint64_t cap, int threads) : opts_(opts) {
  inst.validate();
  costs_ = std::make_unique<TupleCosts>(atom_groups(inst), inst.p, inst.q, inst.lambda());
  const TupleCosts& tc = *costs_;
  if (tc.num_tuples() > cap) {
    throw ResourceError("cost oracle: " + std::to_string(tc.num_tuples()) + " tuples exceed the cap of " +
                        std::to_string(cap));
  }
  flat_ = tc.key_range() <= kFlatCostRange;
  if (flat_) flat_costs_.assign(tc.key_range(), std::numeric_limits<double>::quiet_NaN());
  min_cost_ = std::numeric_limits<double>::infinity();
  max_cost_ = 0;
  auto record = [&](std::uint64_t key, double value, double lower) {
    if (flat_) {
      flat_costs_[key] = value;
    } else {
      hashed_costs_[key] = value;
    }
    min_cost_ = std::min(min_cost_, value);
    max_cost_ = std::max(max_cost_, std::abs(value));
    max_error_ = std::max(max_error_, value - lower);
    ++distinct_;
  };
  if (tc.factored()) {
    KeyTable keys = enumerate_keys(tc, cap, threads);
    auto sols = solve_keys(tc, keys, opts_, threads);
    for (std::size_t j = 0; j < keys.keys.size(); ++j) record(keys.keys[j], sols[j].value, sols[j].lower_bound);
    return;
  }
  // Unfactored keys are tuple indices: evaluate every tuple.
  const std::uint64_t total = tc.num_tuples();
  std::vector<double> value(total), lower(total);
  const bool closed = regime_for(inst.p, inst.q) == Regime::kQ22;
  const auto lam = inst.lambda();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(total, 1 << 20))));
  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> mean;
    VertexTuple t(tc.k());
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t rest = idx;
      for (int i = tc.k() - 1; i >= 0; --i) {
        t[i] = static_cast<int>(rest % tc.size(i));
        rest /= tc.size(i);
      }
      if (closed) {
        value[idx] = lower[idx] = weighted_value_22(tc.groups(), t, lam, mean);
      } else {
        auto sol = solve_fpq_columns(tc.problem(t), opts_);
        value[idx] = sol.value;
        lower[idx] = sol.lower_bound;
      }
    }
  };
  if (threads == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    for (int th = 0; th < threads; ++th) pool.emplace_back(work, total * th / threads, total * (th + 1) / threads);
    for (auto& th : pool) th.join();
  }
  for (std::uint64_t idx = 0; idx < total; ++idx) record(idx, value[idx], lower[idx]);
}

double CostOracle::by_key(std::uint64_t key) const {
  if (flat_) return flat_costs_[key];
  return hashed_costs_.at(key);
}

FpqSolution CostOracle::solve(std::span<const int> tuple) const {
  const TupleCosts& tc = *costs_;
  FpqProblem prob;
  prob.p = tc.p();
  prob.q = tc.q();
  prob.weights = tc.weights();
  for (int i = 0; i < tc.k(); ++i) prob.points.push_back(tc.groups()[i][tuple[i]]);
  return solve_fpq(prob, opts_);
}

MotResult bary_value_mot(const BaryInstance& inst, const MotOptions& opts) {
  if (!(opts.tol > 0)) throw InputError("mot: tol must be positive");
  inst.validate();
  FpqOptions fo;
  fo.tol = opts.tol / 2;
  CostOracle oracle(inst, fo, opts.cap, opts.threads);
  const TupleCosts& tc = oracle.tuples();
  const int k = inst.k();

  MotResult res;
  res.tuples = tc.num_tuples();
  res.distinct_costs = oracle.distinct();

  const int n0 = static_cast<int>(inst.measures[0].size());
  bool uniform_pair = k == 2 && static_cast<int>(inst.measures[1].size()) == n0;
  for (int i = 0; i < k && uniform_pair; ++i) {
    for (double m : inst.measures[i].masses) uniform_pair = uniform_pair && std::abs(m - 1.0 / n0) <= 1e-15;
  }
  if (uniform_pair && !opts.full_lp) {
    std::vector<double> cost(static_cast<std::size_t>(n0) * n0);
    for (int a = 0; a < n0; ++a) {
      for (int b = 0; b < n0; ++b) cost[static_cast<std::size_t>(a) * n0 + b] = oracle.cost(std::vector{a, b});
    }
    auto asg = solve_assignment(cost, n0);
    std::vector<std::pair<VertexTuple, double>> entries;
    for (int a = 0; a < n0; ++a) entries.push_back({{a, asg.column_of[a]}, 1.0 / n0});
    res.plan = make_plan(inst, std::move(entries));
    res.value = asg.cost / n0;
    res.lower_bound = res.value - oracle.max_error();
    res.method = "assignment";
    res.columns = static_cast<std::size_t>(n0);
    return res;
  }

  RowMap rm(inst);
  std::vector<double> rhs(rm.rows);
  for (int i = 0; i < k; ++i) {
    for (std::size_t a = 0; a < inst.measures[i].size(); ++a) {
      const int r = rm.row(i, static_cast<int>(a));
      if (r >= 0) rhs[r] = inst.measures[i].masses[a];
    }
  }
  Simplex<double> lp(rhs);
  std::vector<VertexTuple> column_tuples;
  std::unordered_set<std::uint64_t> present;
  auto add = [&](const VertexTuple& t) {
    if (!present.insert(tuple_index(inst, t)).second) return;
    lp.add_column(oracle.cost(t), tuple_column(rm, t));
    column_tuples.push_back(t);
  };

  LpSolution<double> sol;
  double min_rc = 0;
  if (opts.full_lp) {
    for_each_tuple(tc, [&](std::span<const int> t, std::uint64_t) { add(VertexTuple(t.begin(), t.end())); });
    sol = lp.solve();
    res.method = "full-lp";
    res.rounds = 1;
  } else {
    for (const auto& t : corner_tuples(inst)) add(t);
    const int batch = opts.batch > 0 ? opts.batch : 2 * rm.rows;
    const double threshold = -std::max(opts.tol / 4, 1e-10 * (1 + oracle.max_modulus()));
    res.method = "column-generation";
    while (true) {
      sol = lp.solve();
      ++res.rounds;
      if (sol.status != LpStatus::kOptimal) break;
      std::vector<std::vector<double>> duals(k);
      for (int i = 0; i < k; ++i) {
        for (std::size_t a = 0; a < inst.measures[i].size(); ++a) {
          const int r = rm.row(i, static_cast<int>(a));
          duals[i].push_back(r >= 0 ? sol.duals[r] : 0.0);
        }
      }
      Pricer pricer(oracle, duals, batch, threshold);
      auto found = pricer.run();
      min_rc = std::min(0.0, pricer.min_reduced());
      if (found.empty()) break;
      if (res.rounds >= opts.max_rounds) {
        throw SolverError("mot: column generation round limit reached", sol.objective + min_rc - oracle.max_error(),
                          sol.objective);
      }
      for (const auto& [rc, t] : found) add(t);
    }
  }
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("mot: LP ") + lp_status_name(sol.status), 0, std::numeric_limits<double>::infinity());
  }
  std::vector<std::pair<VertexTuple, double>> entries;
  double value = 0;
  for (std::size_t c = 0; c < column_tuples.size(); ++c) {
    if (sol.x[c] > 0) {
      entries.emplace_back(column_tuples[c], sol.x[c]);
      value += sol.x[c] * oracle.cost(column_tuples[c]);
    }
  }
  res.plan = make_plan(inst, std::move(entries));
  res.value = value;
  res.lower_bound = sol.objective + min_rc - oracle.max_error();
  res.columns = column_tuples.size();
  return res;
}

DiscreteMeasure extract_barycenter(const TransportTensor& plan, const BaryInstance& inst, double tol) {
  inst.validate();
  FpqProblem prob;
  prob.p = inst.p;
  prob.q = inst.q;
  prob.weights = inst.lambda();
  FpqOptions fo;
  fo.tol = tol;
  std::map<std::vector<double>, double> merged;
  double total = 0;
  for (const auto& [t, mass] : plan.entries) {
    if (mass <= 0) continue;
    prob.points.clear();
    for (int i = 0; i < inst.k(); ++i) prob.points.push_back(inst.measures[i].atoms.at(t.at(i)));
    merged[solve_fpq(prob, fo).minimizer] += mass;
    total += mass;
  }
  if (merged.empty()) throw InputError("extract_barycenter: plan has no mass");
  DiscreteMeasure nu;
  for (auto& [atom, mass] : merged) {
    nu.atoms.push_back(atom);
    nu.masses.push_back(mass / total);
  }
  return nu;
}

double barycenter_objective(const BaryInstance& inst, const DiscreteMeasure& nu) {
  inst.validate();
  const auto lam = inst.lambda();
  double total = 0;
  for (int i = 0; i < inst.k(); ++i) total += lam[i] * transport_cost(inst.measures[i], nu, inst.p, inst.q);
  return total;
}

BorgwardtResult borgwardt_2approx(const BaryInstance& inst, std::uint64_t cap) {
  inst.validate();
  std::map<std::vector<double>, int> support_index;
  std::vector<std::vector<double>> support;
  for (const auto& m : inst.measures) {
    for (const auto& a : m.atoms) {
      if (support_index.emplace(a, static_cast<int>(support.size())).second) support.push_back(a);
    }
  }
  const int s = static_cast<int>(support.size());
  const int k = inst.k();
  std::uint64_t vars = s;
  for (const auto& m : inst.measures) vars += m.size() * static_cast<std::uint64_t>(s);
  if (vars > cap) {
    throw ResourceError("borgwardt: " + std::to_string(vars) + " LP variables exceed the cap of " +
                        std::to_string(cap));
  }
  // Rows: first the source marginals of every plan, then plan i's target marginal minus w.
  std::vector<int> source_row(k);
  int rows = 0;
  for (int i = 0; i < k; ++i) {
    source_row[i] = rows;
    rows += static_cast<int>(inst.measures[i].size());
  }
  const int target_row = rows;
  rows += k * s;
  std::vector<double> rhs(rows, 0.0);
  for (int i = 0; i < k; ++i) {
    for (std::size_t a = 0; a < inst.measures[i].size(); ++a) rhs[source_row[i] + a] = inst.measures[i].masses[a];
  }
  Simplex<double> lp(rhs);
  for (int t = 0; t < s; ++t) {
    SparseColumn<double> col;
    for (int i = 0; i < k; ++i) col.emplace_back(target_row + i * s + t, -1.0);
    lp.add_column(0.0, std::move(col));
  }
  const auto lam = inst.lambda();
  for (int i = 0; i < k; ++i) {
    const auto& m = inst.measures[i];
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (int t = 0; t < s; ++t) {
        lp.add_column(lam[i] * lq_pow(m.atoms[a], support[t], inst.p, inst.q),
                      {{source_row[i] + static_cast<int>(a), 1.0}, {target_row + i * s + t, 1.0}});
      }
    }
  }
  auto sol = lp.solve();
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("borgwardt LP: ") + lp_status_name(sol.status), 0, 0);
  }
  BorgwardtResult out;
  out.value = std::max(0.0, sol.objective);
  double total = 0;
  for (int t = 0; t < s; ++t) {
    if (sol.x[t] > 0) total += sol.x[t];
  }
  for (int t = 0; t < s; ++t) {
    if (sol.x[t] > 0) {
      out.nu.atoms.push_back(support[t]);
      out.nu.masses.push_back(sol.x[t] / total);
    }
  }
  return out;
}

int uniform_atom_count(int n, double p, double eps) {
  if (n < 1 || !(p >= 1) || !(eps > 0)) throw InputError("uniform atom count: need n >= 1, p >= 1, eps > 0");
  const double N = std::ceil(4.0 * n * p * std::pow(2.0, p) / eps);
  if (N > 1e8) throw ResourceError("uniformize: " + std::to_string(N) + " atoms per measure is too many");
  return static_cast<int>(N);
}

BaryInstance uniformize(const BaryInstance& inst, double eps, std::optional<int> atoms) {
  inst.validate();
  if (!(eps > 0)) throw InputError("uniformize: eps must be positive");
  for (const auto& m : inst.measures) {
    for (const auto& a : m.atoms) {
      if (lq_norm(a, inst.q) > 1 + 1e-12) throw InputError("uniformize: atoms must lie in the unit l_q ball");
    }
  }
  std::size_t n = 0;
  for (const auto& m : inst.measures) n = std::max(n, m.size());
  const int N = atoms ? *atoms : uniform_atom_count(static_cast<int>(n), inst.p, eps);
  if (N < 1) throw InputError("uniformize: need at least one atom");
  const double rho = eps / (inst.p * std::pow(2.0, inst.p));
  if (rho > 1) throw InputError("uniformize: eps / (p 2^p) must be at most 1");

  BaryInstance out;
  out.weights = inst.weights;
  out.p = inst.p;
  out.q = inst.q;
  for (const auto& m : inst.measures) {
    const std::size_t sz = m.size();
    const std::size_t d = m.dimension();
    std::vector<long long> count(sz);
    std::vector<std::pair<double, std::size_t>> remainder;
    long long assigned = 0;
    for (std::size_t j = 0; j < sz; ++j) {
      const double scaled = m.masses[j] * N;
      count[j] = static_cast<long long>(std::floor(scaled));
      assigned += count[j];
      remainder.emplace_back(-(scaled - count[j]), j);
    }
    std::sort(remainder.begin(), remainder.end());
    for (std::size_t r = 0; assigned < N; ++r, ++assigned) ++count[remainder[r % sz].second];
    // Float rounding can overshoot; take the excess back from the smallest remainders.
    for (std::size_t r = sz; assigned > N && r-- > 0;) {
      const auto j = remainder[r].second;
      if (count[j] > 0) {
        --count[j];
        --assigned;
      }
    }
    DiscreteMeasure u;
    for (std::size_t j = 0; j < sz; ++j) {
      const auto& x = m.atoms[j];
      const bool at_origin = lq_norm(x, inst.q) == 0;
      for (long long l = 0; l < count[j]; ++l) {
        std::vector<double> y = x;
        const double t = rho * static_cast<double>(l) / static_cast<double>(count[j]);
        if (l > 0) {
          if (at_origin) {
            y[static_cast<std::size_t>(l) % d] += t;
          } else {
            for (double& v : y) v *= 1 - t;
          }
        }
        u.atoms.push_back(std::move(y));
      }
    }
    u.masses.assign(u.atoms.size(), 1.0 / N);
    std::set<std::vector<double>> distinct(u.atoms.begin(), u.atoms.end());
    if (distinct.size() != u.atoms.size()) {
      throw InputError("uniformize: split atoms collide (N = " + std::to_string(N) + ", shift scale " +
                       std::to_string(rho) + "); atoms on a common ray need a larger eps or smaller N");
    }
    out.measures.push_back(std::move(u));
  }
  return out;
}

}  // namespace barygap
