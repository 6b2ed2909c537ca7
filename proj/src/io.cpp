#include "barygap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "barygap/errors.hpp"

namespace barygap {

namespace {

// Re-throws nlohmann type and key errors as InputError naming the document kind.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

double parse_q(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return kInf;
  std::size_t used = 0;
  double q = 0;
  try {
    q = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("q: expected a number or 'inf', got '" + text + "'");
  }
  if (used != text.size()) throw InputError("q: trailing characters in '" + text + "'");
  if (!(q >= 1)) throw InputError("q: need q >= 1");
  return q;
}

Json q_to_json(double q) { return std::isinf(q) ? Json("inf") : Json(q); }

double q_from_json(const Json& j) {
  if (j.is_string()) return parse_q(j.get<std::string>());
  if (!j.is_number()) throw InputError("q: expected a number or \"inf\"");
  const double q = j.get<double>();
  if (!(q >= 1)) throw InputError("q: need q >= 1");
  return q;
}

Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  return guarded("graph", [&] {
    const int n = j.at("n").get<int>();
    if (n < 0) throw InputError("graph: n must be nonnegative");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("graph: each edge is a pair [u, v]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Graph(n, edges);
  });
}

Json to_json(const PointConfig& cfg) {
  Json points = Json::array();
  for (const auto& pt : cfg.points) {
    Json entries = Json::array();
    for (const auto& e : pt) entries.push_back({e.coord, static_cast<int>(e.value)});
    points.push_back(std::move(entries));
  }
  Json j{{"p", cfg.p},
         {"q", q_to_json(cfg.q)},
         {"k", cfg.k},
         {"n", cfg.n},
         {"d", cfg.d},
         {"regime", regime_name(cfg.regime)},
         {"points", std::move(points)}};
  if (cfg.source) {
    j["source"] = {{"embedding", cfg.source->embedding},
                   {"graph_hash", cfg.source->graph_hash},
                   {"graph_degree", cfg.source->graph_degree}};
  }
  return j;
}

PointConfig points_from_json(const Json& j) {
  return guarded("point config", [&] {
    PointConfig cfg;
    cfg.p = j.at("p").get<double>();
    cfg.q = q_from_json(j.at("q"));
    cfg.k = j.at("k").get<int>();
    cfg.n = j.at("n").get<int>();
    cfg.d = j.at("d").get<std::size_t>();
    cfg.regime = parse_regime(j.at("regime").get<std::string>());
    if (cfg.regime != regime_for(cfg.p, cfg.q)) {
      throw InputError("point config: regime " + regime_name(cfg.regime) + " does not match (p, q)");
    }
    for (const auto& pt : j.at("points")) {
      SparsePoint sp;
      for (const auto& e : pt) {
        if (!e.is_array() || e.size() != 2) throw InputError("point config: entries are [coord, value] pairs");
        const int v = e[1].get<int>();
        if (v < -1 || v > 1) throw InputError("point config: entry values must be -1, 0 or 1");
        if (v == 0) continue;
        sp.push_back({e[0].get<std::uint32_t>(), static_cast<std::int8_t>(v)});
      }
      cfg.points.push_back(std::move(sp));
    }
    if (j.contains("source")) {
      const auto& s = j["source"];
      cfg.source = EmbeddingSource{s.at("embedding").get<std::string>(), s.value("graph_hash", std::uint64_t{0}),
                                   s.value("graph_degree", -1)};
    }
    cfg.validate();
    return cfg;
  });
}

Json to_json(const DiscreteMeasure& m) { return {{"d", m.dimension()}, {"atoms", m.atoms}, {"masses", m.masses}}; }

DiscreteMeasure measure_from_json(const Json& j) {
  return guarded("measure", [&] {
    DiscreteMeasure m;
    m.atoms = j.at("atoms").get<std::vector<std::vector<double>>>();
    m.masses = j.at("masses").get<std::vector<double>>();
    if (m.atoms.size() != m.masses.size()) throw InputError("measure: atoms and masses differ in length");
    if (j.contains("d")) {
      const auto d = j["d"].get<std::size_t>();
      for (const auto& a : m.atoms) {
        if (a.size() != d) throw InputError("measure: atom dimension differs from d");
      }
    }
    m.validate();
    return m;
  });
}

Json to_json(const BaryInstance& inst) {
  Json measures = Json::array();
  for (const auto& m : inst.measures) measures.push_back(to_json(m));
  Json j{{"p", inst.p}, {"q", q_to_json(inst.q)}, {"measures", std::move(measures)}};
  if (!inst.weights.empty()) j["weights"] = inst.weights;
  return j;
}

BaryInstance bary_instance_from_json(const Json& j) {
  return guarded("instance", [&] {
    BaryInstance inst;
    inst.p = j.at("p").get<double>();
    inst.q = q_from_json(j.at("q"));
    for (const auto& m : j.at("measures")) inst.measures.push_back(measure_from_json(m));
    if (j.contains("weights")) inst.weights = j["weights"].get<std::vector<double>>();
    inst.validate();
    return inst;
  });
}

Json to_json(const TransportTensor& t) {
  Json entries = Json::array();
  for (const auto& [tuple, mass] : t.entries) entries.push_back({tuple, mass});
  return {{"shape", t.shape}, {"entries", std::move(entries)}};
}

Json to_json(const GapCertificate& c) {
  Json j{{"regime", regime_name(c.regime)},
         {"gamma", c.gamma},
         {"delta", c.delta},
         {"threshold", c.threshold()},
         {"provenance", provenance_name(c.provenance)},
         {"n", c.n},
         {"k", c.k},
         {"D", c.degree},
         {"p", c.p},
         {"q", q_to_json(c.q)}};
  if (c.provenance == Provenance::kSolverComputed) {
    j["tolerance"] = c.tolerance;
    j["patterns"] = c.patterns;
    if (c.separation) j["separation"] = *c.separation;
  }
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw InputError("write failed for " + path.string());
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const RunReport& r) {
  return {{"command", r.command}, {"config", r.config},     {"config_hash", config_hash(r.config)},
          {"seed", r.seed},       {"timings", r.timings},   {"results", r.results},
          {"passed", r.passed},   {"version", kToolVersion}};
}

}  // namespace barygap
