#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "barygap/errors.hpp"
#include "barygap/fpq.hpp"

using namespace barygap;

namespace {

double lq_dist_pow(const std::vector<double>& a, const std::vector<double>& b, double p, double q) {
  double r = 0;
  if (std::isinf(q)) {
    for (std::size_t j = 0; j < a.size(); ++j) r = std::max(r, std::abs(a[j] - b[j]));
  } else {
    for (std::size_t j = 0; j < a.size(); ++j) r += std::pow(std::abs(a[j] - b[j]), q);
    r = std::pow(r, 1 / q);
  }
  return std::pow(r, p);
}

double direct_objective(const std::vector<std::vector<double>>& pts, const std::vector<double>& y, double p, double q) {
  double s = 0;
  for (const auto& z : pts) s += lq_dist_pow(z, y, p, q);
  return s;
}

// Random (k, s, t)-collection: a random pair set gets one shared coordinate per
// pair, every vector is padded with private coordinates up to s, and the
// coordinate labels are shuffled.
Collection random_collection(std::mt19937_64& rng, int k, int s, int t) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(t);
  std::vector<std::vector<std::uint32_t>> sup(k);
  std::uint32_t next = 0;
  for (auto [a, b] : pairs) {
    sup[a].push_back(next);
    sup[b].push_back(next);
    ++next;
  }
  for (auto& v : sup)
    while (static_cast<int>(v.size()) < s) v.push_back(next++);
  std::vector<std::uint32_t> relabel(next);
  std::iota(relabel.begin(), relabel.end(), 0u);
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

FpqSolution solve_collection(const Collection& c, double p, double q, double tol) {
  FpqProblem prob{c.dense(), p, q, {}};
  FpqOptions opts;
  opts.tol = tol;
  return solve_fpq(prob, opts);
}

}  // namespace

TEST(Fpq, TwoPointsMean) {
  auto sol = solve_fpq({{{0, 0}, {2, 0}}, 2, 2, {}});
  EXPECT_NEAR(sol.value, 2, 1e-9);
  EXPECT_NEAR(sol.minimizer[0], 1, 1e-9);
  EXPECT_NEAR(sol.minimizer[1], 0, 1e-9);
  EXPECT_EQ(sol.method, FpqMethod::kClosedForm22);
}

TEST(Fpq, SinglePointIsZero) {
  for (double p : {1.0, 2.0, 3.5})
    for (double q : {1.0, 1.5, 2.0, kInf}) {
      auto sol = solve_fpq({{{0.5, -1, 3}}, p, q, {}});
      EXPECT_EQ(sol.value, 0);
      EXPECT_EQ(sol.minimizer, (std::vector<double>{0.5, -1, 3}));
    }
}

TEST(Fpq, CollinearGeometricMedian) {
  auto sol = solve_fpq({{{0, 0}, {1, 1}, {2, 2}}, 1, 2, {}});
  // On the line the points sit at arc length 0, sqrt2, 2 sqrt2.
  EXPECT_NEAR(sol.value, 2 * std::sqrt(2.0), 1e-8);
  auto line = solve_fpq({{{0}, {1}, {2}}, 1, 2, {}});
  EXPECT_NEAR(line.value, 2, 1e-9);
  EXPECT_NEAR(line.minimizer[0], 1, 1e-6);
}

TEST(Fpq, PhiK4AtSixGroupsL1) {
  Graph g = complete_graph(4);
  PointConfig cfg = embed_phi(g, 6, 1, 1);
  std::vector<int> tuple{0, 1, 2, 3, 0, 1};
  auto sol = solve_fpq({tuple_points(cfg, tuple), 1, 1, {}});
  EXPECT_EQ(sol.method, FpqMethod::kCoordinateQ1);
  EXPECT_NEAR(sol.value, 90, 1e-9);
  EXPECT_NEAR(sol.lower_bound, 90, 1e-9);
}

TEST(Fpq, ClosedFormExamples) {
  PointConfig cfg = embed_phi(complete_graph(4), 3);
  std::vector<int> tuple{0, 1, 2};
  auto cf = fpq_closed_form_22(tuple_points(cfg, tuple));
  ASSERT_TRUE(cf.exact_value);
  EXPECT_EQ(*cf.exact_value, Rational(10));
  EXPECT_NEAR(cf.solution.value, 10, 1e-12);
  std::vector<const SparsePoint*> sp{&cfg.point(0, 0), &cfg.point(1, 1), &cfg.point(2, 2)};
  EXPECT_EQ(closed_form_22_exact(sp), Rational(10));

  FpqOptions qn;
  qn.method = FpqMethod::kQuasiNewton;
  EXPECT_NEAR(solve_fpq({tuple_points(cfg, tuple), 2, 2, {}}, qn).value, 10, 1e-8);

  auto anti = fpq_closed_form_22({{1, 0}, {-1, 0}});
  EXPECT_EQ(*anti.exact_value, Rational(2));
  auto same = fpq_closed_form_22({{3, 1}, {3, 1}, {3, 1}});
  EXPECT_EQ(*same.exact_value, Rational(0));
  EXPECT_FALSE(fpq_closed_form_22({{0.5}, {1}}).exact_value);
}

TEST(Fpq, Q1ValueFormula) {
  EXPECT_DOUBLE_EQ(q1_value_formula(4, 4, 6, 1), 456);
  EXPECT_DOUBLE_EQ(q1_value_formula(4, 4, 0, 1), 480);
  EXPECT_DOUBLE_EQ(q1_value_formula(4, 4, 6, 2), 51984);
  EXPECT_THROW(q1_value_formula(4, 3, 0, 1), InputError);
}

TEST(Fpq, Q1CliqueWitness) {
  for (auto [n, k, per] : {std::tuple{4, 4, 114}, std::tuple{2, 2, 2}}) {
    Graph g = complete_graph(n);
    PointConfig cfg = embed_psi(g, k);
    std::vector<int> tuple(k);
    for (int i = 0; i < k; ++i) tuple[i] = i % n;
    auto y = q1_clique_witness(cfg, tuple);
    ASSERT_EQ(y.size(), cfg.d);
    for (int i = 0; i < k; ++i) {
      auto x = cfg.dense(i, tuple[i]);
      long long d = 0;
      for (std::size_t j = 0; j < cfg.d; ++j) d += std::llabs(static_cast<long long>(x[j]) - y[j]);
      EXPECT_EQ(d, per) << n << " " << k << " " << i;
      EXPECT_EQ(per, n * (k - 1) * (n * k - 2 * n + 2) - 2 * (k - 1));
    }
  }
}

TEST(Fpq, Q1WitnessMatchesSolvers) {
  PointConfig cfg = embed_psi(complete_graph(4), 4);
  std::vector<int> tuple{0, 1, 2, 3};
  auto pts = tuple_points(cfg, tuple);
  auto yi = q1_clique_witness(cfg, tuple);
  std::vector<double> y(yi.begin(), yi.end());
  EXPECT_DOUBLE_EQ(direct_objective(pts, y, 1, 1), 456);
  EXPECT_NEAR(solve_fpq({pts, 1, 1, {}}).value, 456, 1e-9);

  FpqOptions opts;
  opts.tol = 1e-6;
  auto p2 = solve_fpq({pts, 2, 1, {}}, opts);
  EXPECT_NEAR(p2.value, 51984, 1e-5);
  EXPECT_LE(p2.lower_bound, 51984 + 1e-6);

  FpqOptions sub;
  sub.method = FpqMethod::kSubgradient;
  sub.tol = 1e-3;
  sub.require_certificate = false;
  sub.max_iterations = 20000;
  auto sg = solve_fpq({pts, 1, 1, {}}, sub);
  EXPECT_NEAR(sg.value, 456, 1e-3 + 1e-9 * 456);
}

TEST(Fpq, QInfCliqueWitness) {
  struct Case {
    int n;
    double p;
    double expected;
  };
  for (auto c : {Case{4, 1, 1.5}, Case{4, 2, 0.75}, Case{3, 1, 1.5}}) {
    PointConfig cfg = embed_xi(complete_graph(c.n), 3, c.p);
    std::vector<int> tuple{0, 1, 2};
    auto y = qinf_clique_witness(cfg, tuple);
    auto pts = tuple_points(cfg, tuple);
    for (const auto& z : pts) EXPECT_LE(lq_dist_pow(z, y, 1, kInf), 0.5);
    EXPECT_DOUBLE_EQ(direct_objective(pts, y, c.p, kInf), c.expected);
    auto sol = solve_fpq({pts, c.p, kInf, {}});
    EXPECT_LE(sol.value, c.expected + 1e-9);
    EXPECT_NEAR(sol.value, c.expected, 1e-8);
  }
}

TEST(FpqRegression, QInfPathInC5) {
  // A 2-edge tuple in C5 already reaches the value 2 at p = 1.
  PointConfig cfg = embed_xi(cycle_graph(5), 3);
  auto sol = solve_fpq({tuple_points(cfg, std::vector{0, 1, 2}), 1, kInf, {}});
  EXPECT_NEAR(sol.value, 2, 1e-8);
  EXPECT_NEAR(sol.lower_bound, 2, 1e-8);
}

TEST(FpqRegression, Q1NonCliqueAboveFormula) {
  // Every tuple with t induced edges sits at or above the formula value.
  auto doubled = even_k_doubling(cycle_graph(4), 1);
  PointConfig cfg = embed_psi(doubled.graph, doubled.k);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      std::vector<int> t{u, v};
      auto sol = solve_fpq({tuple_points(cfg, t), 1, 1, {}});
      int edges = induced_edge_count(doubled.graph, t);
      EXPECT_GE(sol.value + 1e-9, q1_value_formula(8, 2, edges, 1));
    }
}

TEST(Fpq, CertificateSandwichesValue) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1, 1);
  struct Reg {
    double p, q;
  };
  for (auto r :
       {Reg{1, 2}, Reg{1.5, 1}, Reg{3, 1}, Reg{1, kInf}, Reg{2, kInf}, Reg{1.5, 3}, Reg{1, 1.5}, Reg{2.5, 2}}) {
    for (int trial = 0; trial < 10; ++trial) {
      int k = 2 + static_cast<int>(rng() % 4), d = 1 + static_cast<int>(rng() % 5);
      std::vector<std::vector<double>> pts(k, std::vector<double>(d));
      for (auto& z : pts)
        for (auto& x : z) x = U(rng);
      auto sol = solve_fpq({pts, r.p, r.q, {}});
      ASSERT_TRUE(sol.certified);
      ASSERT_LE(sol.lower_bound, sol.value + 1e-12);
      ASSERT_LE(sol.value - sol.lower_bound, 1e-9 + 1e-12 * sol.value);
      ASSERT_NEAR(direct_objective(pts, sol.minimizer, r.p, r.q), sol.value, 1e-9);
      // Minimizer inside the bounding box.
      for (int j = 0; j < d; ++j) {
        double lo = 1e9, hi = -1e9;
        for (auto& z : pts) lo = std::min(lo, z[j]), hi = std::max(hi, z[j]);
        ASSERT_GE(sol.minimizer[j], lo - 1e-12);
        ASSERT_LE(sol.minimizer[j], hi + 1e-12);
      }
      // The forced subgradient method stays above the certified lower bound.
      FpqOptions sub;
      sub.method = FpqMethod::kSubgradient;
      sub.require_certificate = false;
      sub.max_iterations = 2000;
      auto sg = solve_fpq({pts, r.p, r.q, {}}, sub);
      ASSERT_GE(sg.value, sol.lower_bound - 1e-9);
    }
  }
}

TEST(Fpq, BudgetExhaustionReportsBounds) {
  std::vector<std::vector<double>> pts{{0, 0, 1}, {1, 2, 0}, {3, 0, 0}, {0.5, 1, 1}};
  FpqOptions opts;
  opts.method = FpqMethod::kSubgradient;
  opts.max_iterations = 3;
  opts.tol = 1e-12;
  try {
    solve_fpq({pts, 1.5, 3, {}}, opts);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_LE(e.lower(), e.upper());
  }
}

TEST(Fpq, RejectsBadInput) {
  EXPECT_THROW(solve_fpq({{{0}, {1}}, 0.5, 2, {}}), InputError);
  EXPECT_THROW(solve_fpq({{{0}, {1, 2}}, 2, 2, {}}), InputError);
  EXPECT_THROW(solve_fpq({{{0}, {NAN}}, 2, 2, {}}), InputError);
  EXPECT_THROW(solve_fpq({{}, 2, 2, {}}), InputError);
}

TEST(FpqProperty, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_real_distribution<double> P(1.2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 2 + static_cast<int>(rng() % 4), d = 1 + static_cast<int>(rng() % 6);
    double p = P(rng), q = P(rng);
    FpqProblem prob{std::vector<std::vector<double>>(k, std::vector<double>(d)), p, q, {}};
    for (auto& z : prob.points)
      for (auto& x : z) x = U(rng);
    std::vector<double> y(d);
    for (auto& x : y) x = U(rng);
    auto g = fpq_gradient(prob, y);
    for (int j = 0; j < d; ++j) {
      const double h = 1e-6;
      auto yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      double fd = (fpq_objective(prob, yp) - fpq_objective(prob, ym)) / (2 * h);
      ASSERT_NEAR(g[j], fd, 1e-5 * std::max(1.0, std::abs(fd))) << trial << " " << j;
    }
  }
}

TEST(FpqProperty, ClosedFormAgreesWithSolver) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + static_cast<int>(rng() % 5), d = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<double>> pts(k, std::vector<double>(d));
    for (auto& z : pts)
      for (auto& x : z) x = static_cast<int>(rng() % 7) - 3;
    auto cf = fpq_closed_form_22(pts);
    ASSERT_TRUE(cf.exact_value);
    FpqOptions qn;
    qn.method = FpqMethod::kQuasiNewton;
    auto sol = solve_fpq({pts, 2, 2, {}}, qn);
    ASSERT_NEAR(cf.solution.value, sol.value, 1e-8);
    ASSERT_NEAR(to_double(*cf.exact_value), sol.value, 1e-8);
    // Oracle: k * sum ||x||^2 - ||sum x||^2, over k.
    double total = 0;
    for (int j = 0; j < d; ++j) {
      double s = 0, s2 = 0;
      for (auto& z : pts) s += z[j], s2 += z[j] * z[j];
      total += s2 - s * s / k;
    }
    ASSERT_NEAR(total, cf.solution.value, 1e-9);
  }
}

TEST(FpqProperty, PowerGapHelper) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    // The linear bound uses gamma T^{gamma-1} >= gamma / T, which needs T >= 1.
    double T = 1 + 10 * U(rng);
    double t = T * U(rng), t2 = t * U(rng);
    double big = 1 + 4 * U(rng);
    ASSERT_GE(std::pow(t, big) - std::pow(t2, big), std::pow(t - t2, big) - 1e-12);
    double small = 0.01 + 0.98 * U(rng);
    ASSERT_GE(std::pow(t, small) - std::pow(t2, small), small / T * (t - t2) - 1e-12);
  }
}

TEST(FpqProperty, CoordinatesPositiveOnSupport) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    int k = 2 + static_cast<int>(rng() % 3);
    int pairs = k * (k - 1) / 2;
    int t = static_cast<int>(rng() % (pairs + 1));
    int s = (k - 1) + static_cast<int>(rng() % 3);
    auto c = random_collection(rng, k, s, t);
    double p = std::vector<double>{1.5, 2, 3}[rng() % 3];
    double q = std::vector<double>{1.5, 2, 3}[rng() % 3];
    auto sol = solve_collection(c, p, q, 1e-10);
    for (const auto& sup : c.supports)
      for (auto j : sup) ASSERT_GT(sol.minimizer[j], 1e-6) << trial << " p=" << p << " q=" << q;
  }
}

TEST(FpqProperty, AddingAnEdgeStrictlyDecreases) {
  std::mt19937_64 rng(71);
  const double tol = 1e-9;
  for (int trial = 0; trial < 30; ++trial) {
    int k = 2 + static_cast<int>(rng() % 3);
    int pairs = k * (k - 1) / 2;
    int t = static_cast<int>(rng() % pairs);
    int s = (k - 1) + static_cast<int>(rng() % 3);
    auto c = random_collection(rng, k, s, t);
    double p = std::vector<double>{1, 1.5, 2, 3}[rng() % 4];
    double q = std::vector<double>{1.5, 2, 3}[rng() % 3];
    auto moved = add_edge_move(c);
    ASSERT_EQ(verify_collection(moved).t, t + 1);
    double before = solve_collection(c, p, q, tol).value;
    double after = solve_collection(moved, p, q, tol).value;
    ASSERT_LT(after, before - 10 * tol) << trial << " p=" << p << " q=" << q;
  }
}

TEST(FpqProperty, CliqueCollectionsShareTheValue) {
  std::mt19937_64 rng(81);
  const double tol = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    int k = 2 + static_cast<int>(rng() % 3);
    int s = (k - 1) + static_cast<int>(rng() % 3);
    int pairs = k * (k - 1) / 2;
    double p = std::vector<double>{1, 1.5, 2, 3}[rng() % 4];
    double q = std::vector<double>{1.5, 2, 3}[rng() % 3];
    auto a = random_collection(rng, k, s, pairs);
    auto b = random_collection(rng, k, s, pairs);
    ASSERT_NEAR(solve_collection(a, p, q, tol).value, solve_collection(b, p, q, tol).value, 2 * tol);
  }
}

TEST(Fpq, ColumnCompressionPreservesValue) {
  std::vector<std::vector<double>> pts{{1, 1, 0, 5, 1}, {0, 0, 1, 5, 0}, {1, 1, 1, 5, 1}};
  auto cols = compress_columns({pts, 2, 3, {}});
  EXPECT_EQ(cols.num_columns(), 3);
  EXPECT_EQ(cols.multiplicity, (std::vector<double>{3, 1, 1}));
  for (double q : {1.0, 1.5, 3.0, kInf}) {
    auto dense = solve_fpq({pts, 1.5, q, {}});
    ColumnProblem cp = compress_columns({pts, 1.5, q, {}});
    auto col = solve_fpq_columns(cp);
    EXPECT_NEAR(dense.value, col.value, 1e-8) << q;
  }
}

TEST(Fpq, MethodNamesRoundTrip) {
  for (auto m : {FpqMethod::kClosedForm22, FpqMethod::kWeiszfeld, FpqMethod::kSubgradient, FpqMethod::kCoordinateQ1,
                 FpqMethod::kQuasiNewton, FpqMethod::kSimplicialQ1, FpqMethod::kPairwiseQInf, FpqMethod::kTrivial,
                 FpqMethod::kAuto})
    EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_EQ(method_name(FpqMethod::kClosedForm22), "closed-form-22");
  EXPECT_THROW(parse_method("newton"), InputError);
}
