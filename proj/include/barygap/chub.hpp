#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "barygap/embed.hpp"
#include "barygap/graph.hpp"
#include "barygap/rational.hpp"

namespace barygap {

struct ChubOptions {
  // Additive error budget on the minimum; each distinct tuple class is solved to tol / 2.
  double tol = 1e-6;
  std::uint64_t cap = kDefaultEnumerationCap;
  int threads = 1;
  // p = q = 2 with integer points only: every value is computed as a rational.
  bool exact = false;
  // Fill ChubResult::table with F for every tuple (row-major over (j_1, ..., j_k)).
  bool keep_table = false;
  long max_iterations = 100'000;
};

struct ChubResult {
  double value = 0;        // min over tuples of the per-tuple upper bound
  double lower_bound = 0;  // min over tuples of the certified per-tuple lower bound
  VertexTuple argmin;      // lexicographically least tuple within tol of the minimum
  double tolerance = 0;
  std::optional<Rational> exact_value;
  std::string method;
  std::uint64_t tuples = 0;
  std::size_t distinct_classes = 0;
  std::vector<double> table;
};

ChubResult solve_chub(const PointConfig& config, const ChubOptions& opts = {});

// D(k-1)^2 - (2/k) max_multiset_edges(G, k); G must be regular.
Rational chub_closed_form_22(const Graph& g, int k, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace barygap
