#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace barygap {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

using Edge = std::pair<int, int>;
// Vertex sequence of length k; repetition allowed.
using VertexTuple = std::vector<int>;

// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  // Rejects self-loops, duplicates and out-of-range endpoints.
  Graph(int n, std::span<const Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool adjacent(int u, int v) const;
  int degree(int v) const { return static_cast<int>(adj_list_[v].size()); }
  std::span<const int> neighbors(int v) const { return adj_list_[v]; }
  // Sorted, each pair stored as (u, v) with u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_regular() const { return regular_degree().has_value(); }
  // Common degree, or nullopt when degrees differ. The empty graph is 0-regular.
  std::optional<int> regular_degree() const;
  // Throws InputError when the graph is not regular.
  int require_regular_degree() const;

  // FNV-1a over (n, sorted edges); stable across runs and platforms.
  std::uint64_t hash() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_list_;
  std::vector<std::uint8_t> adj_matrix_;
};

void validate_tuple(const Graph& g, std::span<const int> tuple);

// Number of index pairs i < i' whose entries are adjacent. Repeated entries count 0.
int induced_edge_count(const Graph& g, std::span<const int> tuple);

// Maximum of induced_edge_count over all n^k tuples, by exhaustive enumeration.
int max_multiset_edges(const Graph& g, int k, std::uint64_t cap = kDefaultEnumerationCap);

// Lexicographically least k-clique (ascending vertices), if any.
std::optional<std::vector<int>> find_k_clique(const Graph& g, int k, std::uint64_t cap = kDefaultEnumerationCap);
bool has_k_clique(const Graph& g, int k, std::uint64_t cap = kDefaultEnumerationCap);

struct DoubledGraph {
  Graph graph;
  int k = 0;
};

// Two copies of a regular graph joined completely; G has a k-clique iff the
// result has a 2k-clique.
DoubledGraph even_k_doubling(const Graph& g, int k);

Graph complete_graph(int n);
Graph cycle_graph(int n);
// Vertex v is adjacent to v +- o (mod n) for every offset o.
Graph circulant_graph(int n, std::span<const int> offsets);
Graph petersen_graph();
// Configuration model with rejection of loops and multi-edges; degrees above
// (n-1)/2 sample the complement. Deterministic in seed.
Graph random_regular_graph(int n, int degree, std::uint64_t seed, int max_attempts = 200000);

std::uint64_t binomial(int n, int k);

}  // namespace barygap
