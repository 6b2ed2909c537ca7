#include "barygap/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "barygap/chub.hpp"
#include "barygap/errors.hpp"

namespace barygap {

namespace {

constexpr int kMaxSweepK = 6;

int pair_slot(int k, int a, int b) { return a * k - a * (a + 1) / 2 + (b - a - 1); }

// Smallest edge mask over all relabellings, one table per k.
const std::vector<std::uint32_t>& canonical_masks(int k) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::uint32_t>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  const int pairs = k * (k - 1) / 2;
  std::vector<std::vector<int>> maps;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> m(pairs);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        m[pair_slot(k, a, b)] = pair_slot(k, std::min(perm[a], perm[b]), std::max(perm[a], perm[b]));
      }
    }
    maps.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::uint32_t> canon(std::size_t{1} << pairs);
  for (std::uint32_t mask = 0; mask < canon.size(); ++mask) {
    std::uint32_t best = mask;
    for (const auto& m : maps) {
      std::uint32_t img = 0;
      for (int e = 0; e < pairs; ++e) {
        if (mask >> e & 1u) img |= 1u << m[e];
      }
      best = std::min(best, img);
    }
    canon[mask] = best;
  }
  return cache.emplace(k, std::move(canon)).first->second;
}

void require_sweep_shape(int k, int s) {
  if (k < 2) throw InputError("pattern sweep: need k >= 2");
  if (k > kMaxSweepK) {
    throw ResourceError("pattern sweep: k = " + std::to_string(k) + " exceeds the supported maximum of " +
                        std::to_string(kMaxSweepK));
  }
  if (s < k - 1) throw InputError("pattern sweep: need s >= k - 1");
}

void require_delta_budget(const GapCertificate& cert, double tol) {
  if (!(tol > 0) || tol > cert.delta / 10) {
    throw InputError("decide: tol " + std::to_string(tol) + " exceeds delta / 10 = " + std::to_string(cert.delta / 10));
  }
}

}  // namespace

std::string provenance_name(Provenance p) { return p == Provenance::kClosedForm ? "closed-form" : "solver-computed"; }

FpqSolution pattern_value(int k, int s, std::uint32_t edge_mask, double p, double q, double tol) {
  require_sweep_shape(k, s);
  ColumnProblem cp;
  cp.k = k;
  cp.p = p;
  cp.q = q;
  std::vector<int> deg(k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (!(edge_mask >> pair_slot(k, a, b) & 1u)) continue;
      ++deg[a];
      ++deg[b];
      for (int i = 0; i < k; ++i) cp.values.push_back(i == a || i == b ? 1.0 : 0.0);
      cp.multiplicity.push_back(1);
    }
  }
  for (int i = 0; i < k; ++i) {
    if (s == deg[i]) continue;
    for (int j = 0; j < k; ++j) cp.values.push_back(j == i ? 1.0 : 0.0);
    cp.multiplicity.push_back(s - deg[i]);
  }
  FpqOptions opts;
  opts.tol = tol;
  return solve_fpq_columns(cp, opts);
}

PatternSweep sweep_overlap_patterns(int k, int s, double p, double q, double tol) {
  require_sweep_shape(k, s);
  const auto& canon = canonical_masks(k);
  const std::uint32_t full = static_cast<std::uint32_t>(canon.size() - 1);
  PatternSweep out;
  out.nonclique_lower = out.nonclique_value = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (canon[mask] != mask) continue;
    ++out.classes;
    const auto sol = pattern_value(k, s, mask, p, q, tol);
    out.tolerance = std::max(out.tolerance, sol.value - sol.lower_bound);
    if (mask == full) {
      out.clique_value = sol.value;
      out.clique_lower = sol.lower_bound;
    } else if (sol.lower_bound < out.nonclique_lower) {
      out.nonclique_lower = sol.lower_bound;
      out.nonclique_value = sol.value;
      out.nonclique_argmin = mask;
    }
  }
  return out;
}

GapCertificate gap_certificate(int n, int k, int degree, double p, double q) {
  if (k < 2) throw InputError("gap certificate: need k >= 2");
  if (n < 1 || degree < 0 || degree >= n) throw InputError("gap certificate: need 0 <= D < n");
  GapCertificate c;
  c.regime = regime_for(p, q);
  c.n = n;
  c.k = k;
  c.degree = degree;
  c.p = p;
  c.q = q;
  const double kd = k;
  switch (c.regime) {
    case Regime::kQ22:
      c.gamma = static_cast<double>(degree) * (k - 1) * (k - 1) - (k - 1);
      c.delta = 2.0 / kd;
      break;
    case Regime::kQ1: {
      if (k % 2 != 0) throw InputError("gap certificate: q = 1 needs even k");
      const int pairs = static_cast<int>(binomial(k, 2));
      c.gamma = q1_value_formula(n, k, pairs, p);
      c.delta = q1_value_formula(n, k, pairs - 1, p) - c.gamma;
      break;
    }
    case Regime::kQInf:
      if (n < 3) throw InputError("gap certificate: q = inf needs n >= 3");
      c.gamma = kd / std::pow(2.0, p);
      // k = 3 admits a path tuple at exactly 2, below 2 + (k - 2) / 2^p.
      c.delta = k == 3 ? 2 - 3 / std::pow(2.0, p) : 2 - std::pow(2.0, 1 - p);
      break;
    case Regime::kQIn: {
      if (degree < 1) throw InputError("gap certificate: q in (1, inf) needs D >= 1");
      static std::mutex mutex;
      static std::map<std::tuple<int, int, double, double>, PatternSweep> cache;
      const int s = degree * (k - 1);
      PatternSweep sweep;
      {
        std::lock_guard lock(mutex);
        auto key = std::make_tuple(k, s, p, q);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, sweep_overlap_patterns(k, s, p, q)).first;
        sweep = it->second;
      }
      c.provenance = Provenance::kSolverComputed;
      c.gamma = sweep.clique_value;
      c.separation = sweep.nonclique_lower - sweep.clique_value;
      c.delta = *c.separation / 2;
      c.tolerance = sweep.tolerance;
      c.patterns = sweep.classes;
      if (!(c.delta > 0) || !(10 * c.tolerance < c.delta)) {
        throw SolverError("gap certificate: pattern sweep could not separate cliques", sweep.nonclique_lower,
                          sweep.clique_value);
      }
      break;
    }
  }
  return c;
}

ReductionInstance build_instance(const Graph& g, int k, double p, double q) {
  const int degree = g.require_regular_degree();
  if (degree == 0) throw InputError("build_instance: D = 0 makes every atom coincide");
  ReductionInstance inst;
  inst.source_graph = g;
  inst.source_k = k;
  inst.graph = g;
  inst.k = k;
  if (regime_for(p, q) == Regime::kQ1 && k % 2 != 0) {
    auto dbl = even_k_doubling(g, k);
    inst.graph = std::move(dbl.graph);
    inst.k = dbl.k;
    inst.doubled = true;
  }
  const int n = inst.graph.num_vertices();
  inst.certificate = gap_certificate(n, inst.k, inst.graph.require_regular_degree(), p, q);
  inst.points = embed_for(inst.graph, inst.k, p, q);
  inst.bary.p = p;
  inst.bary.q = q;
  inst.bary.measures.resize(inst.k);
  for (int i = 0; i < inst.k; ++i) {
    auto& m = inst.bary.measures[i];
    for (int j = 0; j < n; ++j) m.atoms.push_back(inst.points.dense(i, j));
    m.masses.assign(n, 1.0 / n);
  }
  return inst;
}

std::string solver_name(DecideSolver s) { return s == DecideSolver::kChub ? "chub" : "mot"; }

DecideSolver parse_solver(const std::string& name) {
  if (name == "chub" || name == "chub-bruteforce") return DecideSolver::kChub;
  if (name == "mot" || name == "bary-mot") return DecideSolver::kMot;
  throw InputError("unknown solver '" + name + "'");
}

Decision decide_clique(const ReductionInstance& inst, DecideSolver solver, double tol, std::uint64_t cap, int threads) {
  const auto& cert = inst.certificate;
  require_delta_budget(cert, tol);
  Decision d;
  if (solver == DecideSolver::kChub) {
    ChubOptions opts;
    opts.tol = tol;
    opts.cap = cap;
    opts.threads = threads;
    opts.exact = inst.points.regime == Regime::kQ22;
    const auto res = solve_chub(inst.points, opts);
    d.value = res.value;
    d.lower_bound = res.lower_bound;
    d.exact_value = res.exact_value;
    d.method = res.method;
    d.argmin = res.argmin;
    d.threshold = cert.threshold();
  } else {
    MotOptions opts;
    opts.tol = tol / inst.k;
    opts.cap = cap;
    opts.threads = threads;
    const auto res = bary_value_mot(inst.bary, opts);
    d.value = res.value;
    d.lower_bound = res.lower_bound;
    d.method = res.method;
    d.threshold = cert.threshold() / inst.k;
  }
  d.has_clique = d.value <= d.threshold;
  d.margin = std::abs(d.value - d.threshold);
  return d;
}

}  // namespace barygap
