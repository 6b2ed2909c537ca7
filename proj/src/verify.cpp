#include "barygap/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "barygap/bary.hpp"
#include "barygap/chub.hpp"
#include "barygap/errors.hpp"
#include "barygap/fpq.hpp"

namespace barygap {

namespace {

using Rng = std::mt19937_64;

struct Property {
  explicit Property(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  long trials = 0;
  long failures = 0;
  Json observed = Json::object();
  Json counterexample;

  // The witness is built only for the first failure.
  template <class F>
  void record(bool ok, F&& witness) {
    ++trials;
    if (ok) return;
    ++failures;
    if (passed) counterexample = witness();
    passed = false;
  }

  Json to_json() const {
    Json j{{"name", name}, {"passed", passed}, {"trials", trials}, {"failures", failures}, {"observed", observed}};
    if (!passed) j["counterexample"] = counterexample;
    return j;
  }
};

template <class T>
T pick(Rng& rng, std::initializer_list<T> xs) {
  return *(xs.begin() + rng() % xs.size());
}

Graph random_regular(Rng& rng, int min_n = 4, int max_n = 8, int min_degree = 1) {
  while (true) {
    const int n = min_n + static_cast<int>(rng() % (max_n - min_n + 1));
    if (min_degree >= n) continue;
    const int d = min_degree + static_cast<int>(rng() % (n - min_degree));
    if (n * d % 2) continue;
    return random_regular_graph(n, d, rng());
  }
}

// A regular graph with a k-clique, and the clique.
std::pair<Graph, std::vector<int>> graph_with_clique(Rng& rng, int k, int max_n = 8) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    Graph g = random_regular(rng, std::max(k, 4), max_n, std::max(1, k - 1));
    if (auto c = find_k_clique(g, k)) return {std::move(g), *c};
  }
  Graph g = complete_graph(std::max(k, 3));
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  return {std::move(g), c};
}

std::vector<int> random_tuple(Rng& rng, int n, int k) {
  std::vector<int> t(k);
  for (auto& v : t) v = static_cast<int>(rng() % n);
  return t;
}

bool is_clique_tuple(const Graph& g, std::span<const int> t) {
  const int k = static_cast<int>(t.size());
  return induced_edge_count(g, t) == k * (k - 1) / 2;
}

// Random (k, s, t)-collection: one shared coordinate per chosen pair, private
// padding up to s, shuffled labels.
Collection random_collection(Rng& rng, int k, int s, int t) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(t);
  std::vector<std::vector<std::uint32_t>> sup(k);
  std::uint32_t next = 0;
  for (auto [a, b] : pairs) {
    sup[a].push_back(next);
    sup[b].push_back(next);
    ++next;
  }
  for (auto& v : sup) {
    while (static_cast<int>(v.size()) < s) v.push_back(next++);
  }
  std::vector<std::uint32_t> relabel(next);
  for (std::uint32_t i = 0; i < next; ++i) relabel[i] = i;
  std::shuffle(relabel.begin(), relabel.end(), rng);
  Collection c;
  c.d = next;
  for (auto& v : sup) {
    for (auto& x : v) x = relabel[x];
    std::sort(v.begin(), v.end());
  }
  c.supports = std::move(sup);
  return c;
}

Json collection_json(const Collection& c) { return {{"d", c.d}, {"supports", c.supports}}; }

FpqSolution solve_points(std::vector<std::vector<double>> pts, double p, double q, double tol) {
  FpqOptions opts;
  opts.tol = tol;
  return solve_fpq(FpqProblem{std::move(pts), p, q, {}}, opts);
}

long sparse_dot(const SparsePoint& a, const SparsePoint& b) {
  long s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].coord < b[j].coord) {
      ++i;
    } else if (b[j].coord < a[i].coord) {
      ++j;
    } else {
      s += static_cast<long>(a[i].value) * b[j].value;
      ++i;
      ++j;
    }
  }
  return s;
}

using Suite = std::vector<Property>;

Suite suite_phi_products(Rng& rng, const VerifyOptions& o) {
  Property cross{"cross-group inner products equal the edge indicator"};
  Property norms{"squared norms equal D(k-1)"};
  for (int trial = 0; trial < o.budget; ++trial) {
    Graph g = random_regular(rng, 3, 9, 0);
    const int D = g.require_regular_degree(), n = g.num_vertices();
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto cfg = embed_phi(g, k);
    for (int i = 0; i < k; ++i) {
      for (int v = 0; v < n; ++v) {
        const long sq = sparse_dot(cfg.point(i, v), cfg.point(i, v));
        norms.record(sq == static_cast<long>(D) * (k - 1),
                     [&] { return Json{{"graph", to_json(g)}, {"k", k}, {"group", i}, {"vertex", v}, {"got", sq}}; });
        for (int i2 = i + 1; i2 < k; ++i2) {
          for (int v2 = 0; v2 < n; ++v2) {
            const long ip = sparse_dot(cfg.point(i, v), cfg.point(i2, v2));
            const long want = g.adjacent(v, v2) ? 1 : 0;
            cross.record(ip == want, [&] {
              return Json{{"graph", to_json(g)}, {"k", k}, {"a", {i, v}}, {"b", {i2, v2}}, {"got", ip}, {"want", want}};
            });
          }
        }
      }
    }
  }
  return {cross, norms};
}

Suite suite_coordinate_lower_bound(Rng& rng, const VerifyOptions& o) {
  Property pos{"minimizer positive on every support coordinate"};
  const double floor = 1e-6;
  double smallest = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int pairs = k * (k - 1) / 2;
    const int t = static_cast<int>(rng() % (pairs + 1));
    const int s = (k - 1) + static_cast<int>(rng() % 3);
    const auto c = random_collection(rng, k, s, t);
    const double p = pick(rng, {1.5, 2.0, 3.0}), q = pick(rng, {1.5, 2.0, 3.0});
    const auto sol = solve_points(c.dense(), p, q, 1e-10);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& sup : c.supports) {
      for (auto j : sup) lo = std::min(lo, sol.minimizer[j]);
    }
    smallest = std::min(smallest, lo);
    pos.record(lo > floor,
               [&] { return Json{{"collection", collection_json(c)}, {"p", p}, {"q", q}, {"min_coordinate", lo}}; });
  }
  pos.observed = {{"smallest_support_coordinate", smallest}, {"required_above", floor}};
  return {pos};
}

Suite suite_tuple_collections(Rng& rng, const VerifyOptions& o) {
  Property prop{"phi tuples are (k, D(k-1), induced edges)-collections"};
  for (int trial = 0; trial < o.budget; ++trial) {
    Graph g = random_regular(rng, 3, 9, 1);
    const int D = g.require_regular_degree();
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto cfg = embed_phi(g, k);
    for (int rep = 0; rep < 5; ++rep) {
      const auto tuple = random_tuple(rng, g.num_vertices(), k);
      const auto chk = verify_collection(collection_from_tuple(cfg, tuple));
      const int edges = induced_edge_count(g, tuple);
      prop.record(chk.ok && chk.s == D * (k - 1) && chk.t == edges, [&] {
        return Json{{"graph", to_json(g)},
                    {"k", k},
                    {"tuple", tuple},
                    {"ok", chk.ok},
                    {"s", chk.s},
                    {"t", chk.t},
                    {"violations", chk.violations},
                    {"edges", edges}};
      });
    }
  }
  return {prop};
}

Suite suite_power_gap(Rng& rng, const VerifyOptions& o) {
  Property big{"t^g - t'^g >= (t - t')^g for g >= 1"};
  Property small{"t^g - t'^g >= (g / T)(t - t') for g in (0, 1), T >= 1"};
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 100 * o.budget; ++trial) {
    const double T = 1 + 10 * U(rng);
    const double t = T * U(rng), t2 = t * U(rng);
    const double g1 = 1 + 4 * U(rng);
    const double lhs1 = std::pow(t, g1) - std::pow(t2, g1), rhs1 = std::pow(t - t2, g1);
    big.record(lhs1 >= rhs1 - 1e-12, [&] { return Json{{"t", t}, {"t2", t2}, {"g", g1}}; });
    const double g2 = 0.01 + 0.98 * U(rng);
    const double lhs2 = std::pow(t, g2) - std::pow(t2, g2), rhs2 = g2 / T * (t - t2);
    small.record(lhs2 >= rhs2 - 1e-12, [&] { return Json{{"t", t}, {"t2", t2}, {"g", g2}, {"T", T}}; });
  }
  return {big, small};
}

Suite suite_monotonicity(Rng& rng, const VerifyOptions& o) {
  Property drop{"each add_edge_move lowers F by more than 10 tol"};
  Property shape{"each move keeps s and raises t by one"};
  const double tol = 1e-9;
  double min_drop = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = 3 + static_cast<int>(rng() % 3);
    const int pairs = k * (k - 1) / 2;
    const int s = (k - 1) + static_cast<int>(rng() % 4);
    std::vector<Collection> chain{random_collection(rng, k, s, static_cast<int>(rng() % pairs))};
    while (verify_collection(chain.back()).t < pairs) {
      const auto before = verify_collection(chain.back());
      chain.push_back(add_edge_move(chain.back()));
      const auto after = verify_collection(chain.back());
      shape.record(after.ok && after.s == s && after.t == before.t + 1,
                   [&] { return Json{{"before", collection_json(chain[chain.size() - 2])}}; });
      if (!after.ok) break;
    }
    for (double q : {1.5, 2.0, 3.0}) {
      for (double p : {1.0, 2.0}) {
        FpqSolution prev = solve_points(chain[0].dense(), p, q, tol);
        for (std::size_t i = 1; i < chain.size(); ++i) {
          const auto sol = solve_points(chain[i].dense(), p, q, tol);
          const double d = prev.lower_bound - sol.value;
          min_drop = std::min(min_drop, d);
          drop.record(d > 10 * tol,
                      [&] { return Json{{"before", collection_json(chain[i - 1])}, {"p", p}, {"q", q}, {"drop", d}}; });
          prev = sol;
        }
      }
    }
  }
  drop.observed = {{"min_certified_drop", min_drop}, {"required_above", 10 * tol}};
  return {drop, shape};
}

Suite suite_cliques_equal(Rng& rng, const VerifyOptions& o) {
  Property coll{"complete collections with equal (k, s) share F"};
  Property graphs{"clique tuples of different graphs with equal (k, D) share F"};
  const double tol = 1e-9;
  double spread = 0;
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int D = 1 + static_cast<int>(rng() % 3);
    const double p = pick(rng, {1.0, 1.5, 2.0, 3.0}), q = pick(rng, {1.5, 2.0, 3.0});
    const int s = D * (k - 1);
    const double ref = solve_points(canonical_clique_collection(k, D).dense(), p, q, tol).value;
    const auto c = random_collection(rng, k, s, k * (k - 1) / 2);
    const double v = solve_points(c.dense(), p, q, tol).value;
    spread = std::max(spread, std::abs(v - ref));
    coll.record(std::abs(v - ref) <= 2 * tol, [&] {
      return Json{{"collection", collection_json(c)}, {"p", p}, {"q", q}, {"value", v}, {"canonical", ref}};
    });

    // Two graphs with the same (n, D) and a triangle.
    const int n = 6 + static_cast<int>(rng() % 3);
    const int deg = 3 + static_cast<int>(rng() % 2);
    if (n * deg % 2) continue;
    std::vector<double> values;
    std::vector<Graph> seen;
    for (int attempt = 0; attempt < 30 && values.size() < 2; ++attempt) {
      Graph g = random_regular_graph(n, deg, rng());
      auto cl = find_k_clique(g, 3);
      if (!cl) continue;
      values.push_back(solve_points(tuple_points(embed_phi(g, 3, p, q), *cl), p, q, tol).value);
      seen.push_back(std::move(g));
    }
    if (values.size() == 2) {
      spread = std::max(spread, std::abs(values[0] - values[1]));
      graphs.record(std::abs(values[0] - values[1]) <= 2 * tol, [&] {
        return Json{{"graphs", {to_json(seen[0]), to_json(seen[1])}}, {"p", p}, {"q", q}, {"values", values}};
      });
    }
  }
  coll.observed = {{"worst_spread", spread}, {"allowed", 2 * tol}};
  return {coll, graphs};
}

Suite suite_q1_value(Rng& rng, const VerifyOptions& o) {
  Property k4{"K4, k = 4: subgradient value matches the formula"};
  Property cliques{"clique tuples attain the formula"};
  Property others{"every tuple is at least the formula at its edge count"};
  const int clique[] = {0, 1, 2, 3};
  for (double p : {1.0, 2.0}) {
    const auto cfg = embed_psi(complete_graph(4), 4, p);
    FpqOptions opts;
    opts.method = FpqMethod::kSubgradient;
    opts.require_certificate = false;
    opts.max_iterations = 200'000;
    opts.tol = 1e-6;
    const auto sol = solve_fpq(FpqProblem{tuple_points(cfg, clique), p, 1, {}}, opts);
    const double f = q1_value_formula(4, 4, 6, p);
    const double rel = std::abs(sol.value - f) / f;
    k4.observed[p == 1 ? "p1" : "p2"] = {{"observed", sol.value}, {"formula", f}};
    k4.record(rel <= 1e-4, [&] { return Json{{"p", p}, {"observed", sol.value}, {"formula", f}}; });
  }
  const double tol = 1e-6;
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = pick(rng, {2, 4});
    const double p = pick(rng, {1.0, 2.0});
    auto [g, cl] = graph_with_clique(rng, k, k == 4 ? 6 : 8);
    const int n = g.num_vertices();
    const auto cfg = embed_psi(g, k, p);
    const auto at_clique = solve_points(tuple_points(cfg, cl), p, 1, tol);
    const double f = q1_value_formula(n, k, k * (k - 1) / 2, p);
    cliques.record(std::abs(at_clique.value - f) <= 1e-4 * f, [&] {
      return Json{{"graph", to_json(g)},         {"k", k},      {"p", p}, {"tuple", cl},
                  {"observed", at_clique.value}, {"formula", f}};
    });
    const auto t = random_tuple(rng, n, k);
    const int edges = induced_edge_count(g, t);
    const auto sol = solve_points(tuple_points(cfg, t), p, 1, tol);
    const double ft = q1_value_formula(n, k, edges, p);
    others.record(sol.value >= ft - tol - 1e-12 * ft, [&] {
      return Json{{"graph", to_json(g)}, {"k", k}, {"p", p}, {"tuple", t}, {"observed", sol.value}, {"formula", ft}};
    });
  }
  return {k4, cliques, others};
}

Suite suite_q1_witness(Rng& rng, const VerifyOptions& o) {
  Property prop{"witness l1 distance is n(k-1)(nk-2n+2) - 2(k-1) per vector"};
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = pick(rng, {2, 4});
    auto [g, cl] = graph_with_clique(rng, k, k == 4 ? 6 : 8);
    const long n = g.num_vertices();
    const auto cfg = embed_psi(g, k);
    const auto y = q1_clique_witness(cfg, cl);
    const long want = n * (k - 1) * (n * k - 2 * n + 2) - 2 * (k - 1);
    for (int i = 0; i < k; ++i) {
      std::vector<long> x(cfg.d, 0);
      for (const auto& e : cfg.point(i, cl[i])) x[e.coord] = e.value;
      long dist = 0;
      for (std::size_t c = 0; c < cfg.d; ++c) dist += std::abs(x[c] - y[c]);
      prop.record(dist == want, [&] {
        return Json{{"graph", to_json(g)}, {"k", k}, {"tuple", cl}, {"vector", i}, {"distance", dist}, {"want", want}};
      });
    }
  }
  return {prop};
}

Suite suite_qinf_clique(Rng& rng, const VerifyOptions& o) {
  Property prop{"witness value at most k / 2^p on clique tuples"};
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = pick(rng, {3, 4});
    const double p = pick(rng, {1.0, 2.0});
    auto [g, cl] = graph_with_clique(rng, k);
    const auto cfg = embed_xi(g, k, p);
    const auto y = qinf_clique_witness(cfg, cl);
    const double v = fpq_objective(FpqProblem{tuple_points(cfg, cl), p, kInf, {}}, y);
    const double bound = k / std::pow(2.0, p);
    worst = std::max(worst, v - bound);
    prop.record(v <= bound + 1e-6, [&] {
      return Json{{"graph", to_json(g)}, {"k", k}, {"p", p}, {"tuple", cl}, {"value", v}, {"bound", bound}};
    });
  }
  prop.observed = {{"max_value_minus_bound", worst}};
  return {prop};
}

Suite suite_qinf_nonclique(Rng& rng, const VerifyOptions& o) {
  Property prop{"non-clique tuples at least 2 + (k - 2) / 2^p"};
  std::map<int, double> tightest;  // k -> min lower bound minus requirement
  for (int trial = 0; trial < o.budget; ++trial) {
    const int k = pick(rng, {3, 4});
    const double p = pick(rng, {1.0, 2.0});
    Graph g = random_regular(rng, 4, 8, 1);
    const auto cfg = embed_xi(g, k, p);
    const double need = 2 + (k - 2) / std::pow(2.0, p);
    for (int rep = 0; rep < 5; ++rep) {
      const auto t = random_tuple(rng, g.num_vertices(), k);
      if (is_clique_tuple(g, t)) continue;
      const auto sol = solve_points(tuple_points(cfg, t), p, kInf, 1e-7);
      const double slack = sol.lower_bound - need;
      auto [it, fresh] = tightest.try_emplace(k, slack);
      it->second = std::min(it->second, slack);
      prop.record(sol.lower_bound >= need - 1e-4, [&] {
        return Json{{"graph", to_json(g)},      {"k", k},          {"p", p}, {"tuple", t},
                    {"lower", sol.lower_bound}, {"required", need}};
      });
    }
  }
  for (const auto& [k, s] : tightest) prop.observed["min_slack_k" + std::to_string(k)] = s;
  return {prop};
}

// Every tuple of the phi embedding takes the same value in these regimes.
Property constant_phi_values(Rng& rng, const VerifyOptions& o, double q, std::initializer_list<int> ks,
                             const std::function<double(int k, int D, double p)>& expect, std::string name) {
  Property prop(std::move(name));
  double worst = 0;
  auto check = [&](const Graph& g, int k, double p, std::span<const int> t) {
    const int D = g.require_regular_degree();
    const double want = expect(k, D, p);
    const auto sol = solve_points(tuple_points(embed_phi(g, k, p, q), t), p, q, 1e-7);
    const double rel = std::abs(sol.value - want) / std::max(1.0, want);
    worst = std::max(worst, rel);
    prop.record(rel <= 1e-4, [&] {
      return Json{{"graph", to_json(g)},   {"k", k},          {"p", p}, {"tuple", std::vector<int>(t.begin(), t.end())},
                  {"observed", sol.value}, {"expected", want}};
    });
  };
  for (int k : ks) {
    for (double p : {1.0, 2.0}) {
      const std::vector<int> t(k, 0);
      std::vector<int> distinct(k);
      for (int i = 0; i < k; ++i) distinct[i] = i % 4;
      check(complete_graph(4), k, p, distinct);
      check(complete_graph(4), k, p, t);
    }
  }
  for (int trial = 0; trial < o.budget; ++trial) {
    Graph g = random_regular(rng, 4, 7, 1);
    const int k = *(ks.begin() + rng() % ks.size());
    const double p = pick(rng, {1.0, 2.0});
    check(g, k, p, random_tuple(rng, g.num_vertices(), k));
  }
  prop.observed = {{"worst_relative_deviation", worst}};
  return prop;
}

Suite suite_q1_failure(Rng& rng, const VerifyOptions& o) {
  return {constant_phi_values(
      rng, o, 1, {5, 6}, [](int k, int D, double p) { return k * std::pow(static_cast<double>(D) * (k - 1), p); },
      "phi with q = 1 gives k (D(k-1))^p at every tuple")};
}

Suite suite_qinf_failure(Rng& rng, const VerifyOptions& o) {
  return {constant_phi_values(
      rng, o, kInf, {3, 4}, [](int k, int, double p) { return k / std::pow(2.0, p); },
      "phi with q = inf gives k / 2^p at every tuple")};
}

DiscreteMeasure random_ball_measure(Rng& rng, int n, int d) {
  std::uniform_real_distribution<double> U(-1, 1);
  DiscreteMeasure m;
  double total = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> x(d);
    double norm = 0;
    for (auto& v : x) {
      v = U(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 1) {
      for (auto& v : x) v *= 0.999 / norm;
    }
    m.atoms.push_back(std::move(x));
    m.masses.push_back(0.2 + std::abs(U(rng)));
    total += m.masses.back();
  }
  for (auto& w : m.masses) w /= total;
  return m;
}

Suite suite_uniformize(Rng& rng, const VerifyOptions& o) {
  Property value{"uniformizing moves the value by at most eps"};
  Property shape{"outputs are uniform with atoms in the unit ball"};
  double worst = 0;
  MotOptions opts;
  opts.tol = 1e-9;
  opts.threads = o.threads;
  opts.cap = 100'000'000;  // 1280^2 uniform pairs at eps = 0.05
  for (int trial = 0; trial < o.budget; ++trial) {
    BaryInstance inst{{random_ball_measure(rng, 2, 2), random_ball_measure(rng, 2, 2)}, {}, 2, 2};
    const double before = bary_value_mot(inst, opts).value;
    for (double eps : {0.05, 0.1}) {
      const auto u = uniformize(inst, eps);
      const int N = uniform_atom_count(2, 2, eps);
      bool ok = true;
      for (const auto& m : u.measures) {
        ok = ok && static_cast<int>(m.size()) == N;
        for (std::size_t j = 0; j < m.size(); ++j) {
          double norm = 0;
          for (double v : m.atoms[j]) norm += v * v;
          ok = ok && m.masses[j] == 1.0 / N && std::sqrt(norm) <= 1 + 1e-12;
        }
      }
      shape.record(ok, [&] { return Json{{"instance", to_json(inst)}, {"eps", eps}}; });
      const double after = bary_value_mot(u, opts).value;
      worst = std::max(worst, std::abs(before - after) / eps);
      value.record(std::abs(before - after) <= eps, [&] {
        return Json{{"instance", to_json(inst)}, {"eps", eps}, {"before", before}, {"after", after}};
      });
    }
  }
  value.observed = {{"max_change_over_eps", worst}};
  return {value, shape};
}

using Runner = std::function<Suite(Rng&, const VerifyOptions&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"3.2", suite_phi_products},        {"4.4-lb", suite_coordinate_lower_bound},
      {"4.5", suite_tuple_collections},   {"helper", suite_power_gap},
      {"mono", suite_monotonicity},       {"cliques-equal", suite_cliques_equal},
      {"q1-value", suite_q1_value},       {"q1-witness", suite_q1_witness},
      {"qinf-clique", suite_qinf_clique}, {"qinf-nonclique", suite_qinf_nonclique},
      {"q1-failure", suite_q1_failure},   {"qinf-failure", suite_qinf_failure},
      {"unif", suite_uniformize},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, run] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

RunReport verify_lemma(const std::string& id, const VerifyOptions& opts) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == id; });
  if (it == reg.end()) throw InputError("verify: unknown lemma id '" + id + "'");
  if (opts.budget < 1) throw InputError("verify: budget must be positive");

  RunReport report;
  report.command = "verify";
  report.seed = opts.seed;
  report.config = {{"lemma", id}, {"seed", opts.seed}, {"budget", opts.budget}};
  Rng rng(opts.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = it->second(rng, opts);
  report.timings["properties"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json props = Json::array();
  for (const auto& p : suite) {
    props.push_back(p.to_json());
    report.passed = report.passed && p.passed;
  }
  report.results = {{"lemma", id}, {"properties", std::move(props)}};
  return report;
}

}  // namespace barygap
