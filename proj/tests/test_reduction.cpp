#include <gtest/gtest.h>

#include <cmath>

#include "barygap/chub.hpp"
#include "barygap/errors.hpp"
#include "barygap/reduction.hpp"

using namespace barygap;

namespace {

Graph prism_graph() {
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}};
  return Graph(6, e);
}

}  // namespace

TEST(GapCertificate, Examples) {
  auto q22 = gap_certificate(4, 3, 3, 2, 2);
  EXPECT_EQ(q22.regime, Regime::kQ22);
  EXPECT_DOUBLE_EQ(q22.gamma, 10);
  EXPECT_DOUBLE_EQ(q22.delta, 2.0 / 3);
  EXPECT_EQ(q22.provenance, Provenance::kClosedForm);

  auto q1 = gap_certificate(4, 4, 3, 1, 1);
  EXPECT_DOUBLE_EQ(q1.gamma, 456);
  EXPECT_GE(q1.delta, 0.25);
  EXPECT_DOUBLE_EQ(q1.delta, 4);  // one fewer overlapping pair adds 4 to the l1 sum

  auto qinf = gap_certificate(4, 3, 3, 1, kInf);
  EXPECT_DOUBLE_EQ(qinf.gamma, 1.5);
  EXPECT_DOUBLE_EQ(qinf.delta, 0.5);
  auto qinf4 = gap_certificate(5, 4, 2, 2, kInf);
  EXPECT_DOUBLE_EQ(qinf4.gamma, 1);
  EXPECT_DOUBLE_EQ(qinf4.delta, 1.5);
}

TEST(GapCertificate, RejectsBadRegimeParameters) {
  EXPECT_THROW(gap_certificate(4, 3, 3, 1, 1), InputError);
  EXPECT_THROW(gap_certificate(2, 2, 1, 1, kInf), InputError);
  EXPECT_THROW(gap_certificate(4, 1, 3, 2, 2), InputError);
  EXPECT_THROW(gap_certificate(4, 3, 4, 2, 2), InputError);
  EXPECT_THROW(gap_certificate(4, 3, 0, 1, 2), InputError);
}

TEST(GapCertificate, QinfThreeIsTightOnAPath) {
  // The C5 path (0, 1, 2) is the cheapest non-clique tuple and sits exactly at gamma + delta.
  for (double p : {1.0, 2.0}) {
    auto cert = gap_certificate(5, 3, 2, p, kInf);
    ChubOptions opts;
    opts.tol = 1e-9;
    auto res = solve_chub(embed_xi(cycle_graph(5), 3, p), opts);
    EXPECT_NEAR(res.value, cert.gamma + cert.delta, 1e-8);
    EXPECT_NEAR(res.value, 2, 1e-8);
  }
}

TEST(GapCertificate, QinfFourHoldsOnTriangleGraphs) {
  int offs[] = {1, 2};
  for (const auto& g : {cycle_graph(5), circulant_graph(6, offs), petersen_graph()}) {
    for (double p : {1.0, 2.0}) {
      auto cert = gap_certificate(g.num_vertices(), 4, g.require_regular_degree(), p, kInf);
      ChubOptions opts;
      opts.tol = 1e-9;
      auto res = solve_chub(embed_xi(g, 4, p), opts);
      EXPECT_GE(res.lower_bound, cert.gamma + cert.delta - 1e-8);
    }
  }
}

TEST(PatternSweep, MatchesClosedFormAtTwoTwo) {
  for (int k : {2, 3, 4}) {
    for (int D : {1, 2, 3}) {
      const int s = D * (k - 1);
      auto sw = sweep_overlap_patterns(k, s, 2, 2);
      const double M = static_cast<double>(D) * (k - 1) * (k - 1);
      EXPECT_NEAR(sw.clique_value, M - k + 1, 1e-9);
      EXPECT_NEAR(sw.nonclique_lower, M - k + 1 + 2.0 / k, 1e-9);
    }
  }
  EXPECT_EQ(sweep_overlap_patterns(3, 2, 2, 2).classes, 4);
  EXPECT_EQ(sweep_overlap_patterns(4, 3, 2, 2).classes, 11);
}

TEST(PatternSweep, RejectsShapes) {
  EXPECT_THROW(sweep_overlap_patterns(3, 1, 2, 2), InputError);
  EXPECT_THROW(sweep_overlap_patterns(7, 6, 2, 2), ResourceError);
}

TEST(PatternSweep, BoundsEveryTupleOfRealGraphs) {
  struct Reg {
    double p, q;
  };
  for (auto r : {Reg{1, 2}, Reg{2, 1.5}, Reg{1, 3}}) {
    for (const auto& g : {cycle_graph(5), complete_graph(4), prism_graph()}) {
      const int k = 3, D = g.require_regular_degree();
      auto sw = sweep_overlap_patterns(k, D * (k - 1), r.p, r.q);
      auto cfg = embed_phi(g, k, r.p, r.q);
      ChubOptions opts;
      opts.tol = 1e-9;
      opts.keep_table = true;
      auto res = solve_chub(cfg, opts);
      const int n = g.num_vertices();
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            const int t[] = {a, b, c};
            const double v = res.table[(a * n + b) * n + c];
            if (induced_edge_count(g, t) == 3) {
              ASSERT_NEAR(v, sw.clique_value, 1e-7);
            } else {
              ASSERT_GE(v, sw.nonclique_lower - 1e-9);
            }
          }
        }
      }
    }
  }
}

TEST(PatternSweepProperty, CliqueValueIsGraphIndependent) {
  // Random 3-regular graphs on 8 vertices that contain a triangle.
  for (double q : {1.5, 3.0}) {
    auto sw = sweep_overlap_patterns(3, 6, 1, q);
    int found = 0;
    for (std::uint64_t seed = 0; seed < 40 && found < 4; ++seed) {
      auto g = random_regular_graph(8, 3, seed);
      auto clique = find_k_clique(g, 3);
      if (!clique) continue;
      ++found;
      FpqProblem prob{tuple_points(embed_phi(g, 3, 1, q), *clique), 1, q, {}};
      auto sol = solve_fpq(prob, {1e-9});
      ASSERT_NEAR(sol.value, sw.clique_value, 2e-9 + 1e-9);
    }
    EXPECT_GE(found, 2);
  }
}

TEST(BuildInstance, Shapes) {
  auto a = build_instance(complete_graph(4), 3, 2, 2);
  EXPECT_EQ(a.points.regime, Regime::kQ22);
  ASSERT_EQ(a.bary.k(), 3);
  EXPECT_EQ(a.bary.measures[0].size(), 4u);
  EXPECT_EQ(a.bary.measures[0].dimension(), 48u);
  EXPECT_DOUBLE_EQ(a.bary.measures[2].masses[1], 0.25);
  EXPECT_FALSE(a.doubled);

  auto b = build_instance(cycle_graph(5), 4, 1, 1);
  EXPECT_EQ(b.points.regime, Regime::kQ1);
  EXPECT_EQ(b.points.d, 300u);

  auto c = build_instance(complete_graph(4), 3, 1, kInf);
  EXPECT_EQ(c.points.regime, Regime::kQInf);
  EXPECT_EQ(c.points.d, 48u);

  auto d = build_instance(cycle_graph(5), 3, 1, 1);
  EXPECT_TRUE(d.doubled);
  EXPECT_EQ(d.k, 6);
  EXPECT_EQ(d.graph.num_vertices(), 10);
  EXPECT_EQ(d.source_k, 3);
  EXPECT_EQ(d.graph.require_regular_degree(), 7);

  EXPECT_THROW(build_instance(Graph(4), 2, 2, 2), InputError);
  std::vector<Edge> path{{0, 1}, {1, 2}};
  EXPECT_THROW(build_instance(Graph(3, path), 2, 2, 2), InputError);
}

TEST(DecideClique, Examples) {
  auto k4 = build_instance(complete_graph(4), 3, 2, 2);
  auto d1 = decide_clique(k4, DecideSolver::kChub, 1e-6);
  EXPECT_TRUE(d1.has_clique);
  ASSERT_TRUE(d1.exact_value);
  EXPECT_EQ(*d1.exact_value, Rational(10));

  auto c5 = build_instance(cycle_graph(5), 3, 2, 2);
  auto d2 = decide_clique(c5, DecideSolver::kChub, 1e-6);
  EXPECT_FALSE(d2.has_clique);
  EXPECT_EQ(*d2.exact_value, Rational(20, 3));
  EXPECT_NEAR(d2.margin, 20.0 / 3 - (8 - 2 + 1.0 / 3), 1e-12);

  auto c5inf = build_instance(cycle_graph(5), 3, 1, kInf);
  auto d3 = decide_clique(c5inf, DecideSolver::kChub, 1e-6);
  EXPECT_FALSE(d3.has_clique);
  EXPECT_NEAR(d3.value, 2, 1e-6);

  EXPECT_THROW(decide_clique(k4, DecideSolver::kChub, 0.1), InputError);
  EXPECT_THROW(parse_solver("lp"), InputError);
  EXPECT_EQ(parse_solver("bary-mot"), DecideSolver::kMot);
}

TEST(DecideClique, BarycenterScaleMatchesChubOnVertexTransitiveGraphs) {
  int offs[] = {1, 3};
  for (const auto& g : {complete_graph(4), cycle_graph(5), circulant_graph(6, offs)}) {
    for (double q : {2.0, kInf}) {
      auto inst = build_instance(g, 3, 1 + (q == 2.0), q);
      const double tol = inst.certificate.delta / 20;
      auto c = decide_clique(inst, DecideSolver::kChub, tol);
      auto m = decide_clique(inst, DecideSolver::kMot, tol);
      EXPECT_EQ(c.has_clique, has_k_clique(g, 3));
      EXPECT_EQ(m.has_clique, c.has_clique);
      EXPECT_NEAR(m.value, c.value / 3, tol);
    }
  }
}

TEST(DecideCliqueProperty, SoundOnSmallGraphs) {
  struct Reg {
    double p, q;
  };
  int offs[] = {1, 2};
  for (auto r : {Reg{2, 2}, Reg{1, 2}, Reg{2, 1.5}, Reg{1, 1}, Reg{2, 1}, Reg{1, kInf}, Reg{2, kInf}}) {
    for (const auto& g : {complete_graph(4), cycle_graph(4), cycle_graph(5), circulant_graph(6, offs)}) {
      for (int k : {2, 4}) {
        auto inst = build_instance(g, k, r.p, r.q);
        auto dec = decide_clique(inst, DecideSolver::kChub, inst.certificate.delta / 10);
        ASSERT_EQ(dec.has_clique, has_k_clique(g, k)) << r.p << " " << r.q << " k=" << k;
      }
    }
  }
}
