#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "netmtl/config.hpp"
#include "netmtl/error.hpp"
#include "netmtl/io.hpp"

using namespace netmtl;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / ("netmtl_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Json minimal() {
  return {
      {"schema", 1},
      {"graph", {{"kind", "path"}, {"n", 3}}},
      {"model", {{"kind", "mse"}, {"M", 1}}},
      {"tasks", {{"kind", "common"}, {"value", {0.5}}}},
      {"strategy", {{"kind", "noncooperative"}, {"mu", 0.01}}},
  };
}

}  // namespace

TEST(GraphJson, RoundTrip) {
  Rng rng(2);
  const Graph g = random_geometric_graph(12, 0.5, 0.2, rng).graph;
  const Graph back = graph_from_json(graph_to_json(g));
  EXPECT_EQ(back.adjacency(), g.adjacency());
  const Graph unit = graph_from_json(Json::parse(R"({"n": 3, "edges": [[0, 1], [1, 2, 2.5]]})"));
  EXPECT_EQ(unit.adjacency()(0, 1), 1.0);
  EXPECT_EQ(unit.adjacency()(2, 1), 2.5);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 3, "edges": [], "extra": 1})")), ConfigError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 3, "edges": [[0, 5]]})")), ConfigError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges": []})")), ConfigError);
}

TEST(TaskJson, RoundTrip) {
  TaskField f({2, 3});
  f.stacked() << 1, 2, 3, 4, 5;
  const Json j = task_field_to_json(f);
  EXPECT_TRUE(j["M"].is_null());
  const TaskField back = task_field_from_json(j);
  EXPECT_EQ(back.stacked(), f.stacked());
  EXPECT_EQ(back.block_sizes(), f.block_sizes());
  const TaskField u = TaskField::uniform(2, 2);
  EXPECT_EQ(task_field_to_json(u)["M"], 2);
}

TEST(Files, ReadAndWrite) {
  const fs::path dir = temp_dir();
  EXPECT_THROW(read_json_file(dir / "missing.json"), IoError);
  write_text_file(dir / "bad.json", "{ not json");
  EXPECT_THROW(read_json_file(dir / "bad.json"), ConfigError);
  write_text_file(dir / "ok.json", R"({"a": 1})");
  EXPECT_EQ(read_json_file(dir / "ok.json")["a"], 1);
  EXPECT_THROW(write_text_file(dir / "no" / "such" / "dir" / "x.txt", "x"), IoError);
  EXPECT_THROW(load_config(dir / "absent.json"), ConfigError);
  fs::remove_all(dir);
}

TEST(Config, DefaultsAndValidation) {
  const ExperimentConfig c = parse_config(minimal());
  EXPECT_EQ(c.iters, 1000);
  EXPECT_EQ(c.runs, 1);
  EXPECT_DOUBLE_EQ(c.window, 0.1);
  EXPECT_DOUBLE_EQ(c.mu(), 0.01);
  EXPECT_EQ(c.kind(), StrategyKind::noncooperative);

  Json bad = minimal();
  bad["schema"] = 2;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = minimal();
  bad["colour"] = "blue";
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = minimal();
  bad["window"] = 1.5;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = minimal();
  bad["runs"] = 0;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = minimal();
  bad["strategy"]["mu"] = -1.0;
  EXPECT_THROW(build_strategy(parse_config(bad), build_scenario(parse_config(minimal()))), ConfigError);
  bad = minimal();
  bad["graph"]["radius"] = 0.2;
  EXPECT_THROW(build_graph(parse_config(bad)), ConfigError);
}

TEST(Config, OverridesAndHash) {
  ExperimentConfig c = parse_config(minimal());
  const std::string h0 = config_hash(c);
  Overrides o;
  o.parallel = 8;
  o.output_dir = "elsewhere";
  apply_overrides(c, o);
  EXPECT_EQ(config_hash(c), h0);
  EXPECT_EQ(c.parallel, 8);
  Overrides m;
  m.mu = 0.02;
  m.seed = 77;
  m.iters = 50;
  apply_overrides(c, m);
  EXPECT_DOUBLE_EQ(c.mu(), 0.02);
  EXPECT_EQ(c.seed, 77u);
  EXPECT_EQ(c.iters, 50);
  EXPECT_NE(config_hash(c), h0);
}

TEST(Config, ScenarioFromFiles) {
  const fs::path dir = temp_dir();
  write_text_file(dir / "g.json", graph_to_json(ring_graph(4)).dump());
  TaskField t = TaskField::uniform(4, 1);
  t.stacked() << 1, 2, 3, 4;
  write_text_file(dir / "t.json", task_field_to_json(t).dump());
  Json doc = minimal();
  doc["graph"] = {{"kind", "file"}, {"path", "g.json"}};
  doc["tasks"] = {{"kind", "file"}, {"path", "t.json"}};
  write_text_file(dir / "exp.json", doc.dump());
  const ExperimentConfig c = load_config(dir / "exp.json");
  const Scenario sc = build_scenario(c);
  EXPECT_EQ(sc.graph.adjacency(), ring_graph(4).adjacency());
  EXPECT_EQ(sc.model.truth().stacked(), t.stacked());
  fs::remove_all(dir);
}

TEST(Config, SmoothTasksAreDeterministic) {
  Json doc = minimal();
  doc["graph"] = {{"kind", "random_geometric"}, {"n", 15}, {"radius", 0.5}};
  doc["tasks"] = {{"kind", "smooth"}, {"bandwidth_index", 3}};
  const Scenario a = build_scenario(parse_config(doc));
  const Scenario b = build_scenario(parse_config(doc));
  EXPECT_EQ(a.model.truth().stacked(), b.model.truth().stacked());
  EXPECT_EQ(a.graph.adjacency(), b.graph.adjacency());
  doc["seed"] = 2;
  EXPECT_NE(build_scenario(parse_config(doc)).model.truth().stacked(), a.model.truth().stacked());
}
