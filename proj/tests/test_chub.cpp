#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "barygap/chub.hpp"
#include "barygap/errors.hpp"
#include "barygap/fpq.hpp"
#include "barygap/tuple_costs.hpp"

using namespace barygap;

namespace {

struct Brute {
  double value;
  VertexTuple argmin;
};

// Independent oracle: every tuple solved directly from its dense points.
Brute brute_chub(const PointConfig& cfg, double tol) {
  std::vector<int> t(cfg.k, 0);
  Brute best{1e300, {}};
  while (true) {
    auto pts = tuple_points(cfg, t);
    double v = cfg.regime == Regime::kQ22 ? fpq_closed_form_22(pts).solution.value
                                          : solve_fpq({pts, cfg.p, cfg.q, {}}, {tol}).value;
    if (v < best.value - tol) best = {v, t};
    int pos = cfg.k - 1;
    while (pos >= 0 && ++t[pos] == cfg.n) t[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

Graph random_regular(std::mt19937_64& rng) {
  while (true) {
    int n = 4 + static_cast<int>(rng() % 4);
    int d = 1 + static_cast<int>(rng() % (n - 1));
    if (n * d % 2) continue;
    return random_regular_graph(n, d, rng());
  }
}

ChubOptions exact_opts() {
  ChubOptions o;
  o.exact = true;
  return o;
}

}  // namespace

TEST(Chub, Examples) {
  auto k4 = solve_chub(embed_phi(complete_graph(4), 3), exact_opts());
  EXPECT_EQ(*k4.exact_value, Rational(10));
  EXPECT_EQ(k4.argmin, (VertexTuple{0, 1, 2}));
  auto c5 = solve_chub(embed_phi(cycle_graph(5), 3), exact_opts());
  EXPECT_EQ(*c5.exact_value, Rational(20, 3));
  auto empty = solve_chub(embed_phi(Graph(4), 3), exact_opts());
  EXPECT_EQ(*empty.exact_value, Rational(0));
  auto fl = solve_chub(embed_phi(cycle_graph(5), 3));
  EXPECT_NEAR(fl.value, 20.0 / 3, 1e-9);
  EXPECT_EQ(fl.method, "closed-form-22");
}

TEST(Chub, ClosedFormExamples) {
  EXPECT_EQ(chub_closed_form_22(complete_graph(4), 3), Rational(10));
  EXPECT_EQ(chub_closed_form_22(cycle_graph(4), 3), Rational(20, 3));
  EXPECT_EQ(chub_closed_form_22(complete_graph(4), 4), Rational(24));
  std::vector<Edge> path{{0, 1}, {1, 2}};
  EXPECT_THROW(chub_closed_form_22(Graph(3, path), 2), InputError);
}

TEST(Chub, CapAndExactGuards) {
  ChubOptions small;
  small.cap = 10;
  EXPECT_THROW(solve_chub(embed_phi(cycle_graph(5), 3), small), ResourceError);
  EXPECT_THROW(solve_chub(embed_xi(cycle_graph(5), 3), exact_opts()), InputError);
}

TEST(Chub, MatchesBruteForceAcrossRegimes) {
  std::vector<PointConfig> cases{embed_phi(cycle_graph(5), 3),         embed_phi(complete_graph(4), 3, 1, 2),
                                 embed_phi(cycle_graph(4), 2, 2, 1.5), embed_xi(cycle_graph(5), 3, 1),
                                 embed_xi(complete_graph(4), 3, 2),    embed_psi(cycle_graph(4), 2, 1),
                                 embed_psi(complete_graph(3), 2, 2)};
  for (const auto& cfg : cases) {
    ChubOptions o;
    o.tol = 1e-7;
    auto res = solve_chub(cfg, o);
    auto brute = brute_chub(cfg, 1e-8);
    EXPECT_NEAR(res.value, brute.value, 1e-6) << regime_name(cfg.regime);
    EXPECT_EQ(res.argmin, brute.argmin) << regime_name(cfg.regime);
    EXPECT_LE(res.lower_bound, res.value);
  }
}

TEST(Chub, TableMatchesPerTupleValues) {
  PointConfig cfg = embed_xi(cycle_graph(5), 3);
  ChubOptions o;
  o.keep_table = true;
  auto res = solve_chub(cfg, o);
  ASSERT_EQ(res.table.size(), 125u);
  EXPECT_LT(res.distinct_classes, 125u);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    VertexTuple t{int(rng() % 5), int(rng() % 5), int(rng() % 5)};
    double direct = solve_fpq({tuple_points(cfg, t), 1, kInf, {}}).value;
    EXPECT_NEAR(res.table[t[0] * 25 + t[1] * 5 + t[2]], direct, 1e-8);
  }
}

TEST(ChubProperty, SolverMatchesClosedFormOnRandomRegular) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = random_regular(rng);
    int k = 2 + static_cast<int>(rng() % 3);
    auto res = solve_chub(embed_phi(g, k));
    ASSERT_NEAR(res.value, to_double(chub_closed_form_22(g, k)), 1e-8);
    auto ex = solve_chub(embed_phi(g, k), exact_opts());
    ASSERT_EQ(*ex.exact_value, chub_closed_form_22(g, k));
  }
}

TEST(ChubProperty, CliqueSeparation) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = random_regular(rng);
    int k = 2 + static_cast<int>(rng() % 3);
    int D = *g.regular_degree();
    auto res = solve_chub(embed_phi(g, k), exact_opts());
    Rational gamma = Rational(D) * (k - 1) * (k - 1) - (k - 1);
    if (has_k_clique(g, k)) {
      ASSERT_EQ(*res.exact_value, gamma);
    } else {
      ASSERT_GE(*res.exact_value, gamma + Rational(2, k));
    }
  }
}

TEST(ChubProperty, PermutingGroupsPermutesArgmin) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = random_regular(rng);
    int k = 3;
    PointConfig cfg = embed_phi(g, k);
    auto base = solve_chub(cfg, exact_opts());
    PointConfig shuffled = cfg;
    std::vector<std::vector<int>> perm(k, std::vector<int>(cfg.n));
    for (int i = 0; i < k; ++i) {
      std::iota(perm[i].begin(), perm[i].end(), 0);
      std::shuffle(perm[i].begin(), perm[i].end(), rng);
      for (int j = 0; j < cfg.n; ++j) shuffled.points[i * cfg.n + perm[i][j]] = cfg.point(i, j);
    }
    auto moved = solve_chub(shuffled, exact_opts());
    ASSERT_EQ(*moved.exact_value, *base.exact_value);
    VertexTuple mapped(k);
    for (int i = 0; i < k; ++i) mapped[i] = perm[i][base.argmin[i]];
    // The mapped tuple is optimal in the shuffled instance.
    std::vector<const SparsePoint*> sp;
    for (int i = 0; i < k; ++i) sp.push_back(&shuffled.point(i, mapped[i]));
    ASSERT_EQ(closed_form_22_exact(sp), *base.exact_value);
  }
}

TEST(TupleCosts, EmbeddingsFactorAndKeysDetermineValues) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 8; ++trial) {
    Graph g = random_regular(rng);
    std::vector<PointConfig> cfgs{embed_phi(g, 3, 1.5, 3), embed_psi(g, 2, 2), embed_xi(g, 3, 1)};
    for (const auto& cfg : cfgs) {
      TupleCosts costs(cfg);
      ASSERT_TRUE(costs.factored());
      for (int s = 0; s < 10; ++s) {
        VertexTuple t(cfg.k);
        for (auto& v : t) v = static_cast<int>(rng() % cfg.n);
        double direct = solve_fpq({tuple_points(cfg, t), cfg.p, cfg.q, {}}).value;
        double viaKey = solve_fpq_columns(costs.problem(t)).value;
        ASSERT_NEAR(direct, viaKey, 1e-8);
      }
    }
  }
}

TEST(TupleCosts, GenericGroupsFallBackToTupleIndex) {
  PointGroups groups{{{0, 0}, {1, 0}}, {{0, 1}, {2, 2}, {3, 1}}};
  TupleCosts costs(groups, 2, 2);
  EXPECT_FALSE(costs.factored());
  EXPECT_EQ(costs.num_tuples(), 6u);
  auto table = enumerate_keys(costs, 100);
  EXPECT_EQ(table.keys.size(), 6u);
  EXPECT_EQ(table.first_tuple[4], (VertexTuple{1, 1}));
  EXPECT_THROW(enumerate_keys(costs, 5), ResourceError);
}

TEST(TupleCosts, ThreadedEnumerationIsDeterministic) {
  TupleCosts costs(embed_xi(petersen_graph(), 3));
  auto one = enumerate_keys(costs, 1'000'000, 1);
  auto four = enumerate_keys(costs, 1'000'000, 4);
  EXPECT_EQ(one.keys, four.keys);
  EXPECT_EQ(one.first_tuple, four.first_tuple);
}
