#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "barygap/bary.hpp"
#include "barygap/embed.hpp"
#include "barygap/graph.hpp"
#include "barygap/rational.hpp"

namespace barygap {

enum class Provenance { kClosedForm, kSolverComputed };

std::string provenance_name(Provenance p);

// Clique tuples score at most gamma and every other tuple at least
// gamma + delta, on the CHUB scale (sum of unit-weight costs).
struct GapCertificate {
  Regime regime = Regime::kQ22;
  double gamma = 0;
  double delta = 0;
  Provenance provenance = Provenance::kClosedForm;
  int n = 0;
  int k = 0;
  int degree = 0;
  double p = 2;
  double q = 2;
  // Solver tolerance behind gamma and delta; 0 for closed forms.
  double tolerance = 0;
  // Pattern sweep only: min non-clique lower bound minus clique upper bound.
  std::optional<double> separation;
  int patterns = 0;

  double threshold() const { return gamma + delta / 2; }
};

// F at every overlap pattern of a (k, s, t)-collection, up to relabelling.
// Pattern = graph H on the k vectors; a vector's support is its deg_H private
// shared coordinates plus s - deg_H private ones.
struct PatternSweep {
  int classes = 0;
  double clique_value = 0;
  double clique_lower = 0;
  double nonclique_lower = 0;  // min over non-complete patterns
  double nonclique_value = 0;
  std::uint32_t nonclique_argmin = 0;  // edge mask, pairs (a, b) with a < b in lex order
  double tolerance = 0;                // largest value - lower over all solves
};

// Requires 2 <= k <= 6 and s >= k - 1.
PatternSweep sweep_overlap_patterns(int k, int s, double p, double q, double tol = 1e-9);

// F of the collection with the given overlap pattern, solved directly.
FpqSolution pattern_value(int k, int s, std::uint32_t edge_mask, double p, double q, double tol = 1e-9);

// Q22 and Q1 and QINF from closed forms; QIN from the pattern sweep with half
// the measured separation. Q1 needs even k; QINF needs n >= 3.
GapCertificate gap_certificate(int n, int k, int degree, double p, double q);

struct ReductionInstance {
  Graph graph;  // graph that was embedded; the doubled graph when doubling applied
  int k = 0;
  Graph source_graph;
  int source_k = 0;
  bool doubled = false;
  PointConfig points;
  BaryInstance bary;  // k measures, one atom per point, masses 1/n
  GapCertificate certificate;
};

// Doubles the graph when q = 1 and k is odd. Rejects D = 0 (all atoms coincide).
ReductionInstance build_instance(const Graph& g, int k, double p, double q);

enum class DecideSolver { kChub, kMot };

std::string solver_name(DecideSolver s);
DecideSolver parse_solver(const std::string& name);

struct Decision {
  bool has_clique = false;
  // CHUB scale for kChub, barycenter scale (divided by k) for kMot.
  double value = 0;
  double lower_bound = 0;
  double threshold = 0;
  double margin = 0;  // |value - threshold|
  std::string method;
  std::optional<Rational> exact_value;
  VertexTuple argmin;  // kChub only
};

// tol is on the CHUB scale and must be at most delta / 10. p = q = 2 CHUB
// decisions run in exact rational mode.
Decision decide_clique(const ReductionInstance& inst, DecideSolver solver, double tol,
                       std::uint64_t cap = kDefaultEnumerationCap, int threads = 1);

}  // namespace barygap
