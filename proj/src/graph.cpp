#include "barygap/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "barygap/errors.hpp"

namespace barygap {

namespace {

std::uint64_t checked_power(int base, int exponent, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && total > cap / static_cast<std::uint64_t>(base)) return cap + 1;
    total *= static_cast<std::uint64_t>(base);
  }
  return total;
}

}  // namespace

Graph::Graph(int n) : n_(n), adj_list_(n), adj_matrix_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 0) throw InputError("graph: negative vertex count");
}

Graph::Graph(int n, std::span<const Edge> edges) : Graph(n) {
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InputError("graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") out of range for n=" + std::to_string(n));
    }
    if (u == v) throw InputError("graph: self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    auto& cell = adj_matrix_[static_cast<std::size_t>(u) * n + v];
    if (cell) {
      throw InputError("graph: duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    cell = 1;
    adj_matrix_[static_cast<std::size_t>(v) * n + u] = 1;
    edges_.emplace_back(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  for (auto [u, v] : edges_) {
    adj_list_[u].push_back(v);
    adj_list_[v].push_back(u);
  }
  for (auto& list : adj_list_) std::sort(list.begin(), list.end());
}

bool Graph::adjacent(int u, int v) const { return adj_matrix_[static_cast<std::size_t>(u) * n_ + v] != 0; }

std::optional<int> Graph::regular_degree() const {
  if (n_ == 0) return 0;
  int d = degree(0);
  for (int v = 1; v < n_; ++v) {
    if (degree(v) != d) return std::nullopt;
  }
  return d;
}

int Graph::require_regular_degree() const {
  auto d = regular_degree();
  if (!d) throw InputError("graph is not regular");
  return *d;
}

std::uint64_t Graph::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(n_));
  for (auto [u, v] : edges_) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

void validate_tuple(const Graph& g, std::span<const int> tuple) {
  for (int v : tuple) {
    if (v < 0 || v >= g.num_vertices()) {
      throw InputError("vertex index " + std::to_string(v) + " out of range [0," + std::to_string(g.num_vertices()) +
                       ")");
    }
  }
}

int induced_edge_count(const Graph& g, std::span<const int> tuple) {
  validate_tuple(g, tuple);
  int count = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      if (g.adjacent(tuple[i], tuple[j])) ++count;
    }
  }
  return count;
}

int max_multiset_edges(const Graph& g, int k, std::uint64_t cap) {
  if (k < 1) throw InputError("max_multiset_edges: k must be >= 1");
  const int n = g.num_vertices();
  if (n == 0) throw InputError("max_multiset_edges: empty graph");
  if (checked_power(n, k, cap) > cap) {
    throw ResourceError("max_multiset_edges: n^k exceeds enumeration cap " + std::to_string(cap));
  }
  std::vector<int> tuple(k, 0);
  std::vector<int> partial(k + 1, 0);  // partial[i] = edges among the first i entries
  int best = 0;
  int depth = 0;
  tuple[0] = -1;
  while (depth >= 0) {
    if (++tuple[depth] >= n) {
      --depth;
      continue;
    }
    int gained = 0;
    for (int i = 0; i < depth; ++i) gained += g.adjacent(tuple[i], tuple[depth]) ? 1 : 0;
    partial[depth + 1] = partial[depth] + gained;
    if (depth + 1 == k) {
      best = std::max(best, partial[k]);
    } else {
      ++depth;
      tuple[depth] = -1;
    }
  }
  return best;
}

std::optional<std::vector<int>> find_k_clique(const Graph& g, int k, std::uint64_t cap) {
  if (k < 1) throw InputError("find_k_clique: k must be >= 1");
  const int n = g.num_vertices();
  if (k > n) return std::nullopt;
  if (binomial(n, k) > cap) {
    throw ResourceError("find_k_clique: C(n,k) exceeds enumeration cap " + std::to_string(cap));
  }
  std::vector<int> chosen;
  chosen.reserve(k);
  // Depth-first over ascending vertex lists; the first complete hit is lexicographically least.
  auto extend = [&](auto&& self, int start) -> bool {
    if (static_cast<int>(chosen.size()) == k) return true;
    for (int v = start; v <= n - (k - static_cast<int>(chosen.size())); ++v) {
      bool ok = std::all_of(chosen.begin(), chosen.end(), [&](int u) { return g.adjacent(u, v); });
      if (!ok) continue;
      chosen.push_back(v);
      if (self(self, v + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(extend, 0)) return chosen;
  return std::nullopt;
}

bool has_k_clique(const Graph& g, int k, std::uint64_t cap) { return find_k_clique(g, k, cap).has_value(); }

DoubledGraph even_k_doubling(const Graph& g, int k) {
  g.require_regular_degree();
  if (k < 1) throw InputError("even_k_doubling: k must be >= 1");
  const int n = g.num_vertices();
  std::vector<Edge> edges;
  edges.reserve(2 * g.edges().size() + static_cast<std::size_t>(n) * n);
  for (auto [u, v] : g.edges()) {
    edges.emplace_back(u, v);
    edges.emplace_back(u + n, v + n);
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) edges.emplace_back(u, v + n);
  }
  return {Graph(2 * n, edges), 2 * k};
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph cycle_graph(int n) {
  if (n < 3) throw InputError("cycle_graph: n must be >= 3");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
  return Graph(n, edges);
}

Graph circulant_graph(int n, std::span<const int> offsets) {
  if (n < 1) throw InputError("circulant_graph: n must be >= 1");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<Edge> edges;
  for (int o : offsets) {
    int r = ((o % n) + n) % n;
    if (r == 0) throw InputError("circulant_graph: offset " + std::to_string(o) + " is 0 mod n");
    for (int u = 0; u < n; ++u) {
      int v = (u + r) % n;
      int a = std::min(u, v), b = std::max(u, v);
      auto& cell = seen[static_cast<std::size_t>(a) * n + b];
      if (!cell) {
        cell = 1;
        edges.emplace_back(a, b);
      }
    }
  }
  return Graph(n, edges);
}

Graph petersen_graph() {
  std::vector<Edge> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);          // outer 5-cycle
    edges.emplace_back(i, i + 5);                // spokes
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return Graph(10, edges);
}

Graph random_regular_graph(int n, int degree, std::uint64_t seed, int max_attempts) {
  if (n < 1 || degree < 0 || degree >= n) {
    throw InputError("random_regular_graph: need 0 <= degree < n");
  }
  if ((static_cast<long long>(n) * degree) % 2 != 0) {
    throw InputError("random_regular_graph: n*degree must be even");
  }
  if (2 * degree > n - 1) {
    // Dense degrees rarely pass rejection; sample the sparse complement instead.
    Graph sparse = random_regular_graph(n, n - 1 - degree, seed, max_attempts);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!sparse.adjacent(u, v)) edges.emplace_back(u, v);
    return Graph(n, edges);
  }
  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), degree, v);
  std::vector<std::uint8_t> used(static_cast<std::size_t>(n) * n);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::fill(used.begin(), used.end(), 0);
    std::vector<Edge> edges;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = std::min(stubs[i], stubs[i + 1]), v = std::max(stubs[i], stubs[i + 1]);
      auto& cell = used[static_cast<std::size_t>(u) * n + v];
      if (u == v || cell) {
        simple = false;
        break;
      }
      cell = 1;
      edges.emplace_back(u, v);
    }
    if (simple) return Graph(n, edges);
  }
  throw ResourceError("random_regular_graph: no simple graph after " + std::to_string(max_attempts) + " attempts");
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

}  // namespace barygap
