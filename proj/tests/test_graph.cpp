#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "barygap/errors.hpp"
#include "barygap/graph.hpp"

using namespace barygap;

namespace {

// Independent oracle: odometer over all n^k tuples.
int brute_max_edges(const Graph& g, int k) {
  const int n = g.num_vertices();
  std::vector<int> t(k, 0);
  int best = 0;
  while (true) {
    int count = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) count += g.adjacent(t[a], t[b]);
    best = std::max(best, count);
    int pos = k - 1;
    while (pos >= 0 && ++t[pos] == n) t[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

// Independent oracle: bitmask subsets of size k.
bool brute_clique(const Graph& g, int k) {
  const int n = g.num_vertices();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !g.adjacent(a, b)) ok = false;
    if (ok) return true;
  }
  return false;
}

Graph random_small_regular(std::mt19937_64& rng) {
  while (true) {
    int n = 4 + static_cast<int>(rng() % 5);
    int d = 1 + static_cast<int>(rng() % (n - 1));
    if (n * d % 2) continue;
    return random_regular_graph(n, d, rng());
  }
}

}  // namespace

TEST(Graph, RejectsMalformedEdges) {
  std::vector<Edge> loop{{1, 1}};
  EXPECT_THROW(Graph(3, loop), InputError);
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(Graph(3, dup), InputError);
  std::vector<Edge> out{{0, 3}};
  EXPECT_THROW(Graph(3, out), InputError);
}

TEST(Graph, InducedEdgeCountExamples) {
  Graph k4 = complete_graph(4);
  Graph c5 = cycle_graph(5);
  EXPECT_EQ(induced_edge_count(k4, std::vector{0, 1, 2, 3}), 6);
  EXPECT_EQ(induced_edge_count(k4, std::vector{0, 0, 1}), 2);
  EXPECT_EQ(induced_edge_count(c5, std::vector{0, 1, 2}), 2);
  EXPECT_THROW(induced_edge_count(c5, std::vector{0, 5}), InputError);
}

TEST(Graph, MaxMultisetEdgesExamples) {
  EXPECT_EQ(max_multiset_edges(complete_graph(4), 3), 3);
  EXPECT_EQ(max_multiset_edges(cycle_graph(5), 3), 2);
  EXPECT_EQ(max_multiset_edges(cycle_graph(4), 3), 2);
  EXPECT_EQ(brute_max_edges(cycle_graph(5), 3), 2);
  EXPECT_EQ(brute_max_edges(cycle_graph(4), 3), 2);
  EXPECT_THROW(max_multiset_edges(complete_graph(10), 8, 1000), ResourceError);
}

TEST(Graph, CliqueExamples) {
  EXPECT_TRUE(has_k_clique(complete_graph(4), 4));
  EXPECT_FALSE(has_k_clique(cycle_graph(5), 3));
  EXPECT_FALSE(has_k_clique(petersen_graph(), 3));
  EXPECT_FALSE(brute_clique(petersen_graph(), 3));
  EXPECT_EQ(*find_k_clique(complete_graph(5), 3), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(has_k_clique(complete_graph(30), 15, 1000), ResourceError);
}

TEST(Graph, PetersenShape) {
  Graph g = petersen_graph();
  EXPECT_EQ(g.num_vertices(), 10);
  EXPECT_EQ(g.num_edges(), 15);
  EXPECT_EQ(g.regular_degree(), 3);
}

TEST(Graph, DoublingExamples) {
  auto k4 = even_k_doubling(complete_graph(4), 3);
  EXPECT_EQ(k4.graph.num_vertices(), 8);
  EXPECT_EQ(k4.graph.regular_degree(), 7);
  EXPECT_EQ(k4.k, 6);
  EXPECT_TRUE(brute_clique(k4.graph, 6));
  EXPECT_TRUE(has_k_clique(k4.graph, 6));

  auto c5 = even_k_doubling(cycle_graph(5), 3);
  EXPECT_EQ(c5.graph.num_vertices(), 10);
  EXPECT_EQ(c5.graph.regular_degree(), 7);
  EXPECT_FALSE(brute_clique(c5.graph, 6));
  EXPECT_FALSE(has_k_clique(c5.graph, 6));

  auto k2 = even_k_doubling(complete_graph(2), 1);
  EXPECT_EQ(k2.graph.num_vertices(), 4);
  EXPECT_EQ(k2.graph.regular_degree(), 3);
  EXPECT_EQ(k2.k, 2);
  EXPECT_TRUE(has_k_clique(k2.graph, 2));

  std::vector<Edge> path{{0, 1}, {1, 2}};
  EXPECT_THROW(even_k_doubling(Graph(3, path), 2), InputError);
}

TEST(GraphProperty, MaxEdgesReachesPairsIffClique) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = random_small_regular(rng);
    for (int k = 1; k <= std::min(4, g.num_vertices()); ++k) {
      int best = max_multiset_edges(g, k);
      ASSERT_EQ(best, brute_max_edges(g, k));
      ASSERT_LE(best, k * (k - 1) / 2);
      ASSERT_EQ(best == k * (k - 1) / 2, has_k_clique(g, k));
      ASSERT_EQ(has_k_clique(g, k), brute_clique(g, k));
    }
  }
}

TEST(GraphProperty, DoublingPreservesCliqueDecision) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_small_regular(rng);
    int k = 1 + static_cast<int>(rng() % 3);
    auto doubled = even_k_doubling(g, k);
    ASSERT_EQ(doubled.graph.regular_degree(), *g.regular_degree() + g.num_vertices());
    ASSERT_EQ(doubled.k % 2, 0);
    ASSERT_EQ(brute_clique(doubled.graph, doubled.k), brute_clique(g, k));
  }
}

TEST(GraphProperty, EdgeCountPermutationInvariant) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = random_small_regular(rng);
    std::vector<int> t(5);
    for (auto& v : t) v = static_cast<int>(rng() % g.num_vertices());
    int base = induced_edge_count(g, t);
    std::shuffle(t.begin(), t.end(), rng);
    ASSERT_EQ(induced_edge_count(g, t), base);
  }
}

TEST(Graph, RandomRegularIsDeterministicAndRegular) {
  Graph a = random_regular_graph(8, 3, 42);
  Graph b = random_regular_graph(8, 3, 42);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.regular_degree(), 3);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_THROW(random_regular_graph(5, 3, 1), InputError);
}

TEST(Graph, Circulant) {
  std::vector<int> offsets{1, 2};
  Graph g = circulant_graph(7, offsets);
  EXPECT_EQ(g.regular_degree(), 4);
  Graph c = circulant_graph(6, std::vector<int>{1});
  EXPECT_TRUE(c == cycle_graph(6));
}
