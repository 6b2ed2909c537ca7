#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "barygap/embed.hpp"
#include "barygap/fpq.hpp"
#include "barygap/rational.hpp"

namespace barygap {

// groups[i][j] is point j of group i; all points share one dimension.
using PointGroups = std::vector<std::vector<std::vector<double>>>;

PointGroups dense_groups(const PointConfig& config);

// Maps every tuple (j_1, ..., j_k) to a key such that tuples with equal keys
// have equal coordinate-column multisets, hence equal F values.
//
// When the points are laid out in pair blocks (coordinate (l, u, l2, u2, s) as
// produced by the embeddings) and every group outside {l, l2} is constant on
// block (l, l2), the key is a sum of per-pair class ids and typically takes a
// few thousand values. Otherwise the key is the mixed-radix tuple index.
class TupleCosts {
 public:
  TupleCosts(PointGroups groups, double p, double q, std::vector<double> weights = {});
  explicit TupleCosts(const PointConfig& config, std::vector<double> weights = {});

  int k() const { return static_cast<int>(groups_.size()); }
  int size(int i) const { return static_cast<int>(groups_[i].size()); }
  std::size_t dimension() const { return dim_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const std::vector<double>& weights() const { return weights_; }
  const PointGroups& groups() const { return groups_; }
  // Product of group sizes, saturating at the uint64 maximum.
  std::uint64_t num_tuples() const { return num_tuples_; }
  bool factored() const { return factored_; }
  // Every key is below this bound.
  std::uint64_t key_range() const { return factored_ ? key_range_ : num_tuples_; }

  // Key increment contributed by fixing position i to v, given positions < i.
  std::uint64_t step(int i, const int* prefix, int v) const {
    if (!factored_) return static_cast<std::uint64_t>(v) * stride_[i];
    std::uint64_t s = 0;
    const int n = size(i);
    for (int l = 0; l < i; ++l) s += pair_term_[pair_index(l, i)][prefix[l] * n + v];
    return s;
  }
  std::uint64_t key(std::span<const int> tuple) const;

  // Column form of F at the tuple, weights applied.
  ColumnProblem problem(std::span<const int> tuple) const;
  // Exact p = q = 2 value with unit weights; requires integral coordinates.
  Rational exact_value_22(std::span<const int> tuple) const;

 private:
  int pair_index(int l, int l2) const { return pair_offset_[l] + (l2 - l - 1); }
  bool try_factor();

  PointGroups groups_;
  double p_ = 2, q_ = 2;
  std::vector<double> weights_;
  std::size_t dim_ = 0;
  std::uint64_t num_tuples_ = 0;
  bool factored_ = false;
  std::uint64_t key_range_ = 0;
  std::vector<std::uint64_t> stride_;
  std::vector<int> pair_offset_;
  // pair_term_[pair][v * n + v2] = class id times the pair's radix.
  std::vector<std::vector<std::uint64_t>> pair_term_;
  // pair_class_[pair][v * n + v2] = class id; class_columns_[pair][class] lists (column, count).
  std::vector<std::vector<std::uint32_t>> pair_class_;
  std::vector<std::vector<std::vector<std::pair<std::vector<double>, double>>>> class_columns_;
};

// Distinct keys in lexicographic order of their first tuple.
struct KeyTable {
  std::vector<std::uint64_t> keys;
  std::vector<VertexTuple> first_tuple;
  std::uint64_t tuples = 0;
  std::unordered_map<std::uint64_t, int> index;

  int find(std::uint64_t key) const {
    auto it = index.find(key);
    return it == index.end() ? -1 : it->second;
  }
};

// Throws ResourceError when the tuple count exceeds cap.
KeyTable enumerate_keys(const TupleCosts& costs, std::uint64_t cap, int threads = 1);

// One solve per key at tolerance tol. Failures are rethrown with the key's first tuple.
std::vector<FpqSolution> solve_keys(const TupleCosts& costs, const KeyTable& table, const FpqOptions& opts,
                                    int threads = 1);

// Calls visit(tuple, key) for every tuple in lexicographic order, restricted
// to first entries in [first_begin, first_end); first_end < 0 means all.
template <class Visit>
void for_each_tuple(const TupleCosts& costs, Visit&& visit, int first_begin = 0, int first_end = -1) {
  const int k = costs.k();
  if (k == 0) return;
  if (first_end < 0) first_end = costs.size(0);
  if (first_begin >= first_end) return;
  std::vector<int> t(k, 0);
  t[0] = first_begin;
  std::vector<std::uint64_t> partial(k + 1, 0);
  for (int i = 0; i < k; ++i) {
    if (costs.size(i) == 0) return;
    partial[i + 1] = partial[i] + costs.step(i, t.data(), t[i]);
  }
  while (true) {
    visit(std::span<const int>(t), partial[k]);
    int pos = k - 1;
    while (pos >= 0 && t[pos] + 1 == (pos == 0 ? first_end : costs.size(pos))) --pos;
    if (pos < 0) return;
    ++t[pos];
    partial[pos + 1] = partial[pos] + costs.step(pos, t.data(), t[pos]);
    for (int i = pos + 1; i < k; ++i) {
      t[i] = 0;
      partial[i + 1] = partial[i] + costs.step(i, t.data(), 0);
    }
  }
}

}  // namespace barygap
