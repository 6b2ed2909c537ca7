#include "barygap/chub.hpp"

#include <algorithm>

#include "barygap/errors.hpp"
#include "barygap/fpq.hpp"
#include "barygap/tuple_costs.hpp"

namespace barygap {

ChubResult solve_chub(const PointConfig& config, const ChubOptions& opts) {
  if (!(opts.tol > 0)) throw InputError("chub: tol must be positive");
  config.validate();
  if (opts.exact && config.regime != Regime::kQ22) {
    throw InputError("chub: exact mode needs p = q = 2");
  }
  TupleCosts costs(config);
  KeyTable keys = enumerate_keys(costs, opts.cap, opts.threads);

  ChubResult res;
  res.tuples = keys.tuples;
  res.distinct_classes = keys.keys.size();
  const std::size_t count = keys.keys.size();
  std::vector<double> upper(count), lower(count);
  int best = 0;

  if (opts.exact) {
    std::vector<Rational> exact(count);
    for (std::size_t j = 0; j < count; ++j) {
      exact[j] = costs.exact_value_22(keys.first_tuple[j]);
      upper[j] = lower[j] = to_double(exact[j]);
    }
    for (std::size_t j = 1; j < count; ++j) {
      if (exact[j] < exact[best] || (exact[j] == exact[best] && keys.first_tuple[j] < keys.first_tuple[best])) {
        best = static_cast<int>(j);
      }
    }
    res.exact_value = exact[best];
    res.value = res.lower_bound = to_double(exact[best]);
    res.method = "exact-rational";
  } else {
    FpqOptions fo;
    fo.tol = opts.tol / 2;
    fo.max_iterations = opts.max_iterations;
    auto sols = solve_keys(costs, keys, fo, opts.threads);
    double vmin = sols[0].value, lmin = sols[0].lower_bound;
    for (std::size_t j = 0; j < count; ++j) {
      upper[j] = sols[j].value;
      lower[j] = sols[j].lower_bound;
      vmin = std::min(vmin, upper[j]);
      lmin = std::min(lmin, lower[j]);
    }
    best = -1;
    for (std::size_t j = 0; j < count; ++j) {
      if (upper[j] <= vmin + opts.tol && (best < 0 || keys.first_tuple[j] < keys.first_tuple[best])) {
        best = static_cast<int>(j);
      }
    }
    res.value = vmin;
    res.lower_bound = std::min(lmin, vmin);
    res.method = method_name(sols[best].method);
  }
  res.argmin = keys.first_tuple[best];
  res.tolerance = res.value - res.lower_bound;

  if (opts.keep_table) {
    res.table.reserve(keys.tuples);
    for_each_tuple(costs, [&](std::span<const int>, std::uint64_t key) { res.table.push_back(upper[keys.find(key)]); });
  }
  return res;
}

Rational chub_closed_form_22(const Graph& g, int k, std::uint64_t cap) {
  if (k < 1) throw InputError("chub closed form: k must be >= 1");
  const int D = g.require_regular_degree();
  const Rational M = Rational(D) * (k - 1) * (k - 1);
  return M - Rational(2, k) * max_multiset_edges(g, k, cap);
}

}  // namespace barygap
