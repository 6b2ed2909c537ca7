#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "barygap/bary.hpp"
#include "barygap/embed.hpp"
#include "barygap/graph.hpp"
#include "barygap/reduction.hpp"

namespace barygap {

// std::map-backed, so keys serialize in sorted order.
using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// "inf" or a number >= 1.
double parse_q(const std::string& text);
Json q_to_json(double q);
double q_from_json(const Json& j);

// {"n": int, "edges": [[u, v], ...]}, 0-indexed.
Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// Points as lists of [coord, value] pairs.
Json to_json(const PointConfig& cfg);
PointConfig points_from_json(const Json& j);

// {"d", "atoms", "masses"}.
Json to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const Json& j);

// {"p", "q", "measures", "weights"}; missing weights mean uniform.
Json to_json(const BaryInstance& inst);
BaryInstance bary_instance_from_json(const Json& j);

// {"shape", "entries": [[tuple, mass], ...]}.
Json to_json(const TransportTensor& t);

Json to_json(const GapCertificate& c);

// Parse failures and unreadable paths throw InputError.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

// FNV-1a of the compact dump, as 16 hex digits.
std::string config_hash(const Json& config);

struct RunReport {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::map<std::string, double> timings;  // seconds per stage
  Json results = Json::object();
  bool passed = true;
};

Json to_json(const RunReport& r);

}  // namespace barygap
