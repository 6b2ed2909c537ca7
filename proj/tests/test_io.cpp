#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "barygap/errors.hpp"
#include "barygap/io.hpp"

using namespace barygap;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("barygap_io_" + name);
}

}  // namespace

TEST(Io, ParseQ) {
  EXPECT_TRUE(std::isinf(parse_q("inf")));
  EXPECT_DOUBLE_EQ(parse_q("1.5"), 1.5);
  EXPECT_THROW(parse_q("0.5"), InputError);
  EXPECT_THROW(parse_q("2x"), InputError);
  EXPECT_THROW(parse_q("nan"), InputError);
  EXPECT_EQ(q_to_json(kInf), Json("inf"));
  EXPECT_TRUE(std::isinf(q_from_json(Json("inf"))));
  EXPECT_DOUBLE_EQ(q_from_json(Json(3)), 3);
}

TEST(Io, GraphRoundTrip) {
  const Graph g = petersen_graph();
  const Json j = to_json(g);
  EXPECT_EQ(j["n"], 10);
  EXPECT_EQ(j["edges"].size(), 15u);
  EXPECT_EQ(graph_from_json(j), g);
  EXPECT_EQ(graph_from_json(Json::parse(R"({"n": 3, "edges": [[0, 1], [1, 2]]})")).num_edges(), 2);
}

TEST(Io, GraphRejectsMalformed) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges": []})")), InputError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, 1, 2]]})")), InputError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, 0]]})")), InputError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": "x", "edges": []})")), InputError);
}

TEST(Io, PointConfigRoundTrip) {
  for (double q : {2.0, 1.0, kInf, 1.5}) {
    const auto cfg = embed_for(complete_graph(4), 4, 1, q);
    const auto back = points_from_json(to_json(cfg));
    EXPECT_EQ(back.points, cfg.points);
    EXPECT_EQ(back.d, cfg.d);
    EXPECT_EQ(back.regime, cfg.regime);
    EXPECT_EQ(back.q, cfg.q);
    ASSERT_TRUE(back.source);
    EXPECT_EQ(back.source->embedding, cfg.source->embedding);
    EXPECT_EQ(back.source->graph_hash, cfg.source->graph_hash);
  }
  const Json j = to_json(embed_phi(complete_graph(4), 3));
  EXPECT_EQ(j["regime"], "Q22");
  EXPECT_EQ(j["points"][0][0].size(), 2u);
}

TEST(Io, PointConfigRejectsMismatch) {
  Json j = to_json(embed_phi(complete_graph(4), 3));
  j["regime"] = "Q1";
  EXPECT_THROW(points_from_json(j), InputError);
  j = to_json(embed_phi(complete_graph(4), 3));
  j["points"][0][0] = {0, 2};
  EXPECT_THROW(points_from_json(j), InputError);
  j = to_json(embed_phi(complete_graph(4), 3));
  j["points"].erase(0);
  EXPECT_THROW(points_from_json(j), InputError);
}

TEST(Io, InstanceRoundTrip) {
  BaryInstance inst{{DiscreteMeasure{{{0.0, 1.0}, {1.0, 0.0}}, {0.25, 0.75}}, DiscreteMeasure{{{0.5, 0.5}}, {1.0}}},
                    {0.3, 0.7},
                    1,
                    kInf};
  const auto back = bary_instance_from_json(to_json(inst));
  ASSERT_EQ(back.k(), 2);
  EXPECT_EQ(back.measures[0].atoms, inst.measures[0].atoms);
  EXPECT_EQ(back.measures[0].masses, inst.measures[0].masses);
  EXPECT_EQ(back.weights, inst.weights);
  EXPECT_TRUE(std::isinf(back.q));
  EXPECT_EQ(to_json(inst)["measures"][0]["d"], 2);

  Json bad = to_json(inst);
  bad["measures"][0]["masses"] = {0.5, 0.6};
  EXPECT_THROW(bary_instance_from_json(bad), InputError);
  bad = to_json(inst);
  bad["measures"][1]["d"] = 3;
  EXPECT_THROW(bary_instance_from_json(bad), InputError);
}

TEST(Io, FilesAndHashes) {
  const auto path = temp_file("graph.json");
  write_json_file(path, to_json(cycle_graph(5)));
  EXPECT_EQ(graph_from_json(read_json_file(path)), cycle_graph(5));
  {
    std::ofstream(path) << "{not json";
  }
  EXPECT_THROW(read_json_file(path), InputError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(temp_file("missing.json")), InputError);

  const Json a = Json::parse(R"({"b": 1, "a": [1, 2]})");
  const Json b = Json::parse(R"({"a": [1, 2], "b": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(Json::parse(R"({"a": [2, 1], "b": 1})")));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Io, ReportFields) {
  RunReport r;
  r.command = "reduce";
  r.config = {{"k", 3}};
  r.seed = 7;
  r.timings["solve"] = 0.5;
  r.results = {{"value", 1.0}};
  const Json j = to_json(r);
  for (const char* key : {"command", "config", "config_hash", "seed", "timings", "results", "passed", "version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["config_hash"], config_hash(r.config));
  EXPECT_EQ(j["version"], kToolVersion);
}

TEST(Io, CertificateJson) {
  const Json c = to_json(gap_certificate(4, 3, 3, 2, 2));
  EXPECT_EQ(c["regime"], "Q22");
  EXPECT_DOUBLE_EQ(c["gamma"].get<double>(), 10);
  EXPECT_FALSE(c.contains("separation"));
  const Json s = to_json(gap_certificate(5, 3, 2, 2, 1.5));
  EXPECT_EQ(s["provenance"], "solver-computed");
  EXPECT_TRUE(s.contains("separation"));
  EXPECT_EQ(s["q"], 1.5);
}
