#include "barygap/tuple_costs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "barygap/errors.hpp"

namespace barygap {

namespace {

constexpr std::uint64_t kMaxKeyRange = std::uint64_t{1} << 62;
constexpr std::uint64_t kFlatKeyRange = std::uint64_t{1} << 26;

using ColumnList = std::vector<std::pair<std::vector<double>, double>>;

std::string tuple_string(const VertexTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

ColumnProblem to_problem(const std::map<std::vector<double>, double>& merged, int k, double p, double q,
                         const std::vector<double>& weights) {
  ColumnProblem cp;
  cp.k = k;
  cp.p = p;
  cp.q = q;
  cp.weights = weights;
  for (const auto& [col, count] : merged) {
    cp.values.insert(cp.values.end(), col.begin(), col.end());
    cp.multiplicity.push_back(count);
  }
  return cp;
}

}  // namespace

PointGroups dense_groups(const PointConfig& config) {
  PointGroups g(config.k);
  for (int i = 0; i < config.k; ++i) {
    g[i].reserve(config.n);
    for (int j = 0; j < config.n; ++j) g[i].push_back(config.dense(i, j));
  }
  return g;
}

TupleCosts::TupleCosts(const PointConfig& config, std::vector<double> weights)
    : TupleCosts(dense_groups(config), config.p, config.q, std::move(weights)) {}

TupleCosts::TupleCosts(PointGroups groups, double p, double q, std::vector<double> weights)
    : groups_(std::move(groups)), p_(p), q_(q), weights_(std::move(weights)) {
  if (groups_.empty()) throw InputError("tuple costs: need at least one group");
  if (!weights_.empty() && weights_.size() != groups_.size()) {
    throw InputError("tuple costs: one weight per group required");
  }
  bool have_dim = false;
  for (const auto& grp : groups_) {
    if (grp.empty()) throw InputError("tuple costs: empty group");
    for (const auto& pt : grp) {
      if (!have_dim) {
        dim_ = pt.size();
        have_dim = true;
      } else if (pt.size() != dim_) {
        throw InputError("tuple costs: points differ in dimension");
      }
    }
  }
  const int kk = k();
  stride_.assign(kk, 1);
  num_tuples_ = 1;
  for (int i = kk - 1; i >= 0; --i) {
    stride_[i] = num_tuples_;
    const auto sz = static_cast<std::uint64_t>(size(i));
    num_tuples_ = num_tuples_ > std::numeric_limits<std::uint64_t>::max() / sz
                      ? std::numeric_limits<std::uint64_t>::max()
                      : num_tuples_ * sz;
  }
  factored_ = try_factor();
}

bool TupleCosts::try_factor() {
  const int kk = k();
  if (kk < 2) return false;
  const int n = size(0);
  for (int i = 1; i < kk; ++i) {
    if (size(i) != n) return false;
  }
  const std::size_t pairs = binomial(kk, 2);
  const std::size_t block = static_cast<std::size_t>(n) * n;
  if (dim_ == 0 || dim_ % (pairs * block) != 0) return false;
  const std::size_t per_pair = dim_ / (pairs * block);

  pair_offset_.assign(kk, 0);
  for (int l = 1; l < kk; ++l) pair_offset_[l] = pair_offset_[l - 1] + (kk - l);

  std::vector<std::vector<std::uint32_t>> classes(pairs);
  std::vector<std::vector<ColumnList>> columns(pairs);
  std::vector<std::uint64_t> radix(pairs);
  std::uint64_t range = 1;
  std::vector<std::size_t> coords;
  for (int l = 0; l < kk; ++l) {
    for (int l2 = l + 1; l2 < kk; ++l2) {
      const int pi = pair_index(l, l2);
      coords.clear();
      for (int u = 0; u < n; ++u) {
        for (int u2 = 0; u2 < n; ++u2) {
          const std::size_t base = pair_coordinate(kk, n, l, u, l2, u2) * per_pair;
          for (std::size_t s = 0; s < per_pair; ++s) coords.push_back(base + s);
        }
      }
      for (int i = 0; i < kk; ++i) {
        if (i == l || i == l2) continue;
        for (int w = 1; w < n; ++w) {
          for (auto c : coords) {
            if (groups_[i][w][c] != groups_[i][0][c]) return false;
          }
        }
      }
      std::map<ColumnList, std::uint32_t> intern;
      classes[pi].resize(block);
      std::vector<std::vector<double>> cols(coords.size(), std::vector<double>(kk));
      for (int v = 0; v < n; ++v) {
        for (int v2 = 0; v2 < n; ++v2) {
          for (std::size_t c = 0; c < coords.size(); ++c) {
            for (int i = 0; i < kk; ++i) {
              const int w = i == l ? v : (i == l2 ? v2 : 0);
              cols[c][i] = groups_[i][w][coords[c]];
            }
          }
          auto sorted = cols;
          std::sort(sorted.begin(), sorted.end());
          ColumnList list;
          for (auto& col : sorted) {
            if (!list.empty() && list.back().first == col) {
              list.back().second += 1;
            } else {
              list.emplace_back(col, 1.0);
            }
          }
          auto [it, inserted] = intern.emplace(std::move(list), static_cast<std::uint32_t>(intern.size()));
          if (inserted) columns[pi].push_back(it->first);
          classes[pi][static_cast<std::size_t>(v) * n + v2] = it->second;
        }
      }
      radix[pi] = range;
      const auto count = static_cast<std::uint64_t>(intern.size());
      if (range > kMaxKeyRange / count) return false;
      range *= count;
    }
  }
  pair_term_.assign(pairs, {});
  for (std::size_t pi = 0; pi < pairs; ++pi) {
    pair_term_[pi].resize(block);
    for (std::size_t j = 0; j < block; ++j) pair_term_[pi][j] = classes[pi][j] * radix[pi];
  }
  pair_class_ = std::move(classes);
  class_columns_ = std::move(columns);
  key_range_ = range;
  return true;
}

std::uint64_t TupleCosts::key(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != k()) throw InputError("tuple costs: tuple length must be k");
  std::uint64_t s = 0;
  for (int i = 0; i < k(); ++i) {
    if (tuple[i] < 0 || tuple[i] >= size(i)) throw InputError("tuple costs: tuple entry out of range");
    s += step(i, tuple.data(), tuple[i]);
  }
  return s;
}

ColumnProblem TupleCosts::problem(std::span<const int> tuple) const {
  key(tuple);  // validates
  const int kk = k();
  if (factored_) {
    const int n = size(0);
    std::map<std::vector<double>, double> merged;
    for (int l = 0; l < kk; ++l) {
      for (int l2 = l + 1; l2 < kk; ++l2) {
        const int pi = pair_index(l, l2);
        const auto cls = pair_class_[pi][static_cast<std::size_t>(tuple[l]) * n + tuple[l2]];
        for (const auto& [col, count] : class_columns_[pi][cls]) merged[col] += count;
      }
    }
    return to_problem(merged, kk, p_, q_, weights_);
  }
  FpqProblem prob;
  prob.p = p_;
  prob.q = q_;
  prob.weights = weights_;
  for (int i = 0; i < kk; ++i) prob.points.push_back(groups_[i][tuple[i]]);
  return compress_columns(prob);
}

Rational TupleCosts::exact_value_22(std::span<const int> tuple) const {
  for (double w : weights_) {
    if (w != 1.0) throw InputError("exact value: weights must be unit");
  }
  const ColumnProblem cp = problem(tuple);
  const int kk = cp.k;
  Rational total = 0;
  for (int c = 0; c < cp.num_columns(); ++c) {
    Rational sum = 0, sum_sq = 0;
    for (int i = 0; i < kk; ++i) {
      const double v = cp.values[static_cast<std::size_t>(c) * kk + i];
      if (v != std::floor(v) || std::abs(v) > 1e15) {
        throw InputError("exact value: coordinates must be integers");
      }
      const Rational r(static_cast<long long>(v));
      sum += r;
      sum_sq += r * r;
    }
    total += Rational(static_cast<long long>(cp.multiplicity[c])) * (Rational(kk) * sum_sq - sum * sum);
  }
  return total / kk;
}

KeyTable enumerate_keys(const TupleCosts& costs, std::uint64_t cap, int threads) {
  if (costs.num_tuples() > cap) {
    throw ResourceError("tuple enumeration: " + std::to_string(costs.num_tuples()) + " tuples exceed the cap of " +
                        std::to_string(cap));
  }
  const int first = costs.size(0);
  threads = std::max(1, std::min(threads, first));
  struct Local {
    std::vector<std::uint64_t> keys;
    std::vector<VertexTuple> tuples;
  };
  std::vector<Local> locals(threads);
  const bool flat = costs.key_range() <= kFlatKeyRange;
  auto work = [&](int t) {
    const int lo = static_cast<int>(static_cast<long long>(first) * t / threads);
    const int hi = static_cast<int>(static_cast<long long>(first) * (t + 1) / threads);
    Local& out = locals[t];
    std::vector<std::uint8_t> seen_flat(flat ? costs.key_range() : 0);
    std::unordered_set<std::uint64_t> seen_hash;
    std::uint64_t last = std::numeric_limits<std::uint64_t>::max();
    for_each_tuple(
        costs,
        [&](std::span<const int> tuple, std::uint64_t key) {
          if (key == last) return;
          last = key;
          bool fresh;
          if (flat) {
            fresh = !seen_flat[key];
            seen_flat[key] = 1;
          } else {
            fresh = seen_hash.insert(key).second;
          }
          if (fresh) {
            out.keys.push_back(key);
            out.tuples.emplace_back(tuple.begin(), tuple.end());
          }
        },
        lo, hi);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  KeyTable table;
  table.tuples = costs.num_tuples();
  for (auto& local : locals) {
    for (std::size_t j = 0; j < local.keys.size(); ++j) {
      auto [it, inserted] = table.index.emplace(local.keys[j], static_cast<int>(table.keys.size()));
      if (inserted) {
        table.keys.push_back(local.keys[j]);
        table.first_tuple.push_back(std::move(local.tuples[j]));
      }
    }
  }
  return table;
}

std::vector<FpqSolution> solve_keys(const TupleCosts& costs, const KeyTable& table, const FpqOptions& opts,
                                    int threads) {
  const int count = static_cast<int>(table.keys.size());
  std::vector<FpqSolution> out(count);
  std::atomic<int> next{0};
  std::mutex err_mutex;
  int err_index = count;
  std::exception_ptr err;
  auto work = [&] {
    while (true) {
      const int j = next.fetch_add(1);
      if (j >= count) return;
      try {
        out[j] = solve_fpq_columns(costs.problem(table.first_tuple[j]), opts);
      } catch (const SolverError& e) {
        std::lock_guard lock(err_mutex);
        if (j < err_index) {
          err_index = j;
          err = std::make_exception_ptr(SolverError(
              std::string(e.what()) + " at tuple " + tuple_string(table.first_tuple[j]), e.lower(), e.upper()));
        }
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (j < err_index) {
          err_index = j;
          err = std::current_exception();
        }
      }
    }
  };
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace barygap
