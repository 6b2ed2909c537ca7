#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barygap/graph.hpp"

namespace barygap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Q22: p = q = 2. QIN: q in (1, inf) otherwise. Q1: q = 1. QINF: q = inf.
enum class Regime { kQ22, kQIn, kQ1, kQInf };

Regime regime_for(double p, double q);
std::string regime_name(Regime r);
Regime parse_regime(const std::string& name);

struct SparseEntry {
  std::uint32_t coord;
  std::int8_t value;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};
// Entries sorted by coord, values nonzero.
using SparsePoint = std::vector<SparseEntry>;

struct EmbeddingSource {
  std::string embedding;  // "phi", "psi" or "xi"
  std::uint64_t graph_hash = 0;
  int graph_degree = 0;
};

// k groups of n points in {-1,0,1}^d; point (i, j) is points[i * n + j].
struct PointConfig {
  int k = 0;
  int n = 0;
  std::size_t d = 0;
  double p = 2;
  double q = 2;
  Regime regime = Regime::kQ22;
  std::vector<SparsePoint> points;
  std::optional<EmbeddingSource> source;

  const SparsePoint& point(int i, int j) const { return points[static_cast<std::size_t>(i) * n + j]; }
  std::vector<double> dense(int i, int j) const;
  // Largest ||x - x'||_q^p over all pairs of points.
  double support_diameter_pow() const;
  // Throws InputError on shape, ordering or value violations.
  void validate() const;
};

// Index of coordinate (l, u, l2, u2), l < l2, in lexicographic order. Groups 0-based.
std::size_t pair_coordinate(int k, int n, int l, int u, int l2, int u2);

// Sign (-1)^{|{1..i} \ {l, l2}|}; all three arguments 1-based group indices.
int tau(int l, int l2, int i);

PointConfig embed_phi(const Graph& g, int k, double p = 2, double q = 2);
PointConfig embed_psi(const Graph& g, int k, double p = 1);
PointConfig embed_xi(const Graph& g, int k, double p = 1);
// phi for q in (1, inf), psi for q = 1, xi for q = inf.
PointConfig embed_for(const Graph& g, int k, double p, double q);

// Binary vectors stored by support (sorted coordinates).
struct Collection {
  std::size_t d = 0;
  std::vector<std::vector<std::uint32_t>> supports;

  int k() const { return static_cast<int>(supports.size()); }
  std::vector<std::vector<double>> dense() const;
};

struct CollectionCheck {
  bool ok = false;
  int s = 0;
  int t = 0;
  std::vector<std::string> violations;
};

// Equal support sizes, pairwise overlaps in {0, 1} with t overlapping pairs,
// and no coordinate nonzero in more than two vectors.
CollectionCheck verify_collection(std::span<const std::vector<int>> vectors);
CollectionCheck verify_collection(const Collection& c);

Collection canonical_clique_collection(int k, int D);

// Turns the first disjoint pair into an overlapping one by moving the first
// vector's smallest private coordinate onto the second vector's smallest private
// coordinate. Keeps s, raises t by one.
Collection add_edge_move(const Collection& c);

// The phi points of a tuple as a collection; values must be binary.
Collection collection_from_tuple(const PointConfig& config, std::span<const int> tuple);

}  // namespace barygap
