#include "barygap/embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "barygap/errors.hpp"

namespace barygap {

Regime regime_for(double p, double q) {
  if (!(p >= 1) || std::isnan(q) || q < 1) throw InputError("need p >= 1 and q in [1, inf]");
  if (q == 1) return Regime::kQ1;
  if (std::isinf(q)) return Regime::kQInf;
  if (p == 2 && q == 2) return Regime::kQ22;
  return Regime::kQIn;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kQ22:
      return "Q22";
    case Regime::kQIn:
      return "QIN";
    case Regime::kQ1:
      return "Q1";
    case Regime::kQInf:
      return "QINF";
  }
  return "?";
}

Regime parse_regime(const std::string& name) {
  if (name == "Q22") return Regime::kQ22;
  if (name == "QIN") return Regime::kQIn;
  if (name == "Q1") return Regime::kQ1;
  if (name == "QINF") return Regime::kQInf;
  throw InputError("unknown regime '" + name + "'");
}

std::vector<double> PointConfig::dense(int i, int j) const {
  std::vector<double> out(d, 0.0);
  for (const auto& e : point(i, j)) out[e.coord] = e.value;
  return out;
}

double PointConfig::support_diameter_pow() const {
  double best = 0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const auto& x = points[a];
      const auto& y = points[b];
      double acc = 0;
      auto add = [&](int diff) {
        double m = std::abs(diff);
        if (std::isinf(q))
          acc = std::max(acc, m);
        else
          acc += std::pow(m, q);
      };
      std::size_t ia = 0, ib = 0;
      while (ia < x.size() || ib < y.size()) {
        if (ib == y.size() || (ia < x.size() && x[ia].coord < y[ib].coord)) {
          add(x[ia++].value);
        } else if (ia == x.size() || y[ib].coord < x[ia].coord) {
          add(-y[ib++].value);
        } else {
          add(x[ia++].value - y[ib++].value);
        }
      }
      double norm = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
      best = std::max(best, std::pow(norm, p));
    }
  }
  return best;
}

void PointConfig::validate() const {
  if (k < 1 || n < 1) throw InputError("point config: need k >= 1 and n >= 1");
  regime_for(p, q);
  if (points.size() != static_cast<std::size_t>(k) * n) {
    throw InputError("point config: expected k*n = " + std::to_string(k * n) + " points, got " +
                     std::to_string(points.size()));
  }
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& pt = points[idx];
    for (std::size_t e = 0; e < pt.size(); ++e) {
      if (pt[e].coord >= d) throw InputError("point config: coordinate out of range");
      if (pt[e].value < -1 || pt[e].value > 1 || pt[e].value == 0) {
        throw InputError("point config: entries must be -1 or 1 (zeros omitted)");
      }
      if (e > 0 && pt[e - 1].coord >= pt[e].coord) {
        throw InputError("point config: coordinates must be strictly increasing");
      }
    }
  }
}

std::size_t pair_coordinate(int k, int n, int l, int u, int l2, int u2) {
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::size_t offset = 0;
  for (int l0 = 0; l0 < l; ++l0) offset += nn * static_cast<std::size_t>(k - 1 - l0);
  return offset + (static_cast<std::size_t>(u) * (k - 1 - l) + (l2 - l - 1)) * n + u2;
}

int tau(int l, int l2, int i) {
  int count = i - (l <= i ? 1 : 0) - (l2 <= i ? 1 : 0);
  return count % 2 == 0 ? 1 : -1;
}

namespace {

void require_group_count(int k) {
  if (k < 1) throw InputError("embedding: k must be >= 1");
}

template <class Entry>
PointConfig build_config(const Graph& g, int k, double p, double q, std::size_t per_pair, const std::string& name,
                         Entry entry) {
  const int n = g.num_vertices();
  PointConfig cfg;
  cfg.k = k;
  cfg.n = n;
  cfg.d = binomial(k, 2) * static_cast<std::size_t>(n) * n * per_pair;
  cfg.p = p;
  cfg.q = q;
  cfg.regime = regime_for(p, q);
  cfg.points.resize(static_cast<std::size_t>(k) * n);
  cfg.source = EmbeddingSource{name, g.hash(), g.regular_degree().value_or(-1)};
  for (int i = 0; i < k; ++i) {
    for (int v = 0; v < n; ++v) {
      auto& pt = cfg.points[static_cast<std::size_t>(i) * n + v];
      std::uint32_t coord = 0;
      for (int l = 0; l < k; ++l) {
        for (int u = 0; u < n; ++u) {
          for (int l2 = l + 1; l2 < k; ++l2) {
            for (int u2 = 0; u2 < n; ++u2) {
              for (std::size_t s = 0; s < per_pair; ++s, ++coord) {
                int value = entry(i, v, l, u, l2, u2, s == 0 ? 1 : -1);
                if (value != 0) pt.push_back({coord, static_cast<std::int8_t>(value)});
              }
            }
          }
        }
      }
    }
  }
  return cfg;
}

}  // namespace

PointConfig embed_phi(const Graph& g, int k, double p, double q) {
  require_group_count(k);
  g.require_regular_degree();
  return build_config(g, k, p, q, 1, "phi", [&](int i, int v, int l, int u, int l2, int u2, int) {
    bool hit = (i == l && v == u) || (i == l2 && v == u2);
    return hit && g.adjacent(u, u2) ? 1 : 0;
  });
}

PointConfig embed_psi(const Graph& g, int k, double p) {
  require_group_count(k);
  if (k % 2 != 0) throw InputError("embed_psi: k must be even");
  g.require_regular_degree();
  return build_config(g, k, p, 1.0, 2, "psi", [&](int i, int v, int l, int u, int l2, int u2, int s) {
    if (i != l && i != l2) return tau(l + 1, l2 + 1, i + 1);
    if (i == l) return v == u ? s : 0;
    if (v != u2) return 0;
    return g.adjacent(u, u2) ? s : -s;
  });
}

PointConfig embed_xi(const Graph& g, int k, double p) {
  require_group_count(k);
  if (g.num_vertices() < 3) throw InputError("embed_xi: need n >= 3");
  return build_config(g, k, p, kInf, 1, "xi", [&](int i, int v, int l, int u, int l2, int u2, int) {
    if (i == l2 && v == u2) return 1;
    if (i == l && v == u) return g.adjacent(u, u2) ? 1 : -1;
    return 0;
  });
}

PointConfig embed_for(const Graph& g, int k, double p, double q) {
  switch (regime_for(p, q)) {
    case Regime::kQ1:
      return embed_psi(g, k, p);
    case Regime::kQInf:
      return embed_xi(g, k, p);
    default:
      return embed_phi(g, k, p, q);
  }
}

std::vector<std::vector<double>> Collection::dense() const {
  std::vector<std::vector<double>> out(supports.size(), std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < supports.size(); ++i) {
    for (auto c : supports[i]) out[i][c] = 1.0;
  }
  return out;
}

CollectionCheck verify_collection(const Collection& c) {
  CollectionCheck check;
  const int k = c.k();
  if (k == 0) {
    check.violations.push_back("empty collection");
    return check;
  }
  check.s = static_cast<int>(c.supports[0].size());
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(c.supports[i].size()) != check.s) {
      check.violations.push_back("vector " + std::to_string(i) + " has support " +
                                 std::to_string(c.supports[i].size()) + ", expected " + std::to_string(check.s));
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      std::vector<std::uint32_t> common;
      std::set_intersection(c.supports[a].begin(), c.supports[a].end(), c.supports[b].begin(), c.supports[b].end(),
                            std::back_inserter(common));
      if (common.size() == 1) {
        ++check.t;
      } else if (common.size() > 1) {
        check.violations.push_back("vectors " + std::to_string(a) + "," + std::to_string(b) + " share " +
                                   std::to_string(common.size()) + " coordinates");
      }
    }
  }
  std::map<std::uint32_t, int> multiplicity;
  for (const auto& supp : c.supports) {
    for (auto coord : supp) ++multiplicity[coord];
  }
  for (auto [coord, count] : multiplicity) {
    if (count > 2) {
      check.violations.push_back("coordinate " + std::to_string(coord) + " nonzero in " + std::to_string(count) +
                                 " vectors");
    }
  }
  check.ok = check.violations.empty();
  return check;
}

CollectionCheck verify_collection(std::span<const std::vector<int>> vectors) {
  Collection c;
  c.d = vectors.empty() ? 0 : vectors[0].size();
  for (const auto& vec : vectors) {
    if (vec.size() != c.d) throw InputError("verify_collection: vectors differ in length");
    std::vector<std::uint32_t> supp;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (vec[j] != 0 && vec[j] != 1) throw InputError("verify_collection: non-binary entry");
      if (vec[j] == 1) supp.push_back(static_cast<std::uint32_t>(j));
    }
    c.supports.push_back(std::move(supp));
  }
  return verify_collection(c);
}

Collection canonical_clique_collection(int k, int D) {
  if (k < 2 || D < 1) throw InputError("canonical_clique_collection: need k >= 2 and D >= 1");
  const std::size_t pairs = binomial(k, 2);
  const std::size_t pad = static_cast<std::size_t>(D - 1) * (k - 1);
  Collection c;
  c.d = pairs + k * pad;
  c.supports.resize(k);
  std::uint32_t coord = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b, ++coord) {
      c.supports[a].push_back(coord);
      c.supports[b].push_back(coord);
    }
  }
  for (int i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < pad; ++r) {
      c.supports[i].push_back(static_cast<std::uint32_t>(pairs + i * pad + r));
    }
    std::sort(c.supports[i].begin(), c.supports[i].end());
  }
  return c;
}

Collection add_edge_move(const Collection& c) {
  auto check = verify_collection(c);
  if (!check.ok) throw InputError("add_edge_move: input is not a collection");
  const int k = c.k();
  if (check.t >= static_cast<int>(binomial(k, 2))) {
    throw InputError("add_edge_move: every pair already overlaps");
  }
  if (check.s < k - 1) throw InputError("add_edge_move: need s >= k - 1");

  std::map<std::uint32_t, int> multiplicity;
  for (const auto& supp : c.supports) {
    for (auto coord : supp) ++multiplicity[coord];
  }
  auto first_private = [&](int i) {
    for (auto coord : c.supports[i]) {
      if (multiplicity[coord] == 1) return coord;
    }
    throw InputError("add_edge_move: no private coordinate");
  };
  auto disjoint = [&](int a, int b) {
    std::vector<std::uint32_t> common;
    std::set_intersection(c.supports[a].begin(), c.supports[a].end(), c.supports[b].begin(), c.supports[b].end(),
                          std::back_inserter(common));
    return common.empty();
  };
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (!disjoint(a, b)) continue;
      Collection out = c;
      auto from = first_private(a);
      auto to = first_private(b);
      auto& supp = out.supports[a];
      supp.erase(std::find(supp.begin(), supp.end(), from));
      supp.insert(std::lower_bound(supp.begin(), supp.end(), to), to);
      return out;
    }
  }
  throw InputError("add_edge_move: no disjoint pair");
}

Collection collection_from_tuple(const PointConfig& config, std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != config.k) {
    throw InputError("collection_from_tuple: tuple length must equal k");
  }
  Collection c;
  c.d = config.d;
  for (int i = 0; i < config.k; ++i) {
    if (tuple[i] < 0 || tuple[i] >= config.n) throw InputError("tuple entry out of range");
    std::vector<std::uint32_t> supp;
    for (const auto& e : config.point(i, tuple[i])) {
      if (e.value != 1) throw InputError("collection_from_tuple: point is not binary");
      supp.push_back(e.coord);
    }
    c.supports.push_back(std::move(supp));
  }
  return c;
}

}  // namespace barygap
