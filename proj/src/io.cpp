#include "netmtl/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "netmtl/error.hpp"

namespace netmtl {

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& e : graph.edge_list()) edges.push_back({e.from, e.to, e.weight});
  return {{"n", graph.size()}, {"edges", edges}};
}

Graph graph_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ConfigError("graph json: expected {\"n\": N, \"edges\": [...]}");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "n" && key != "edges") throw ConfigError("graph json: unknown key '" + key + "'");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw ConfigError("graph json: n must be a positive integer");
  }
  std::vector<WeightedEdge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || (e.size() != 2 && e.size() != 3) || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || (e.size() == 3 && !e[2].is_number())) {
      throw ConfigError("graph json: each edge must be [k, l] or [k, l, weight]");
    }
    edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e.size() == 3 ? e[2].get<double>() : 1.0});
  }
  return Graph::from_edges(doc["n"].get<Index>(), edges);
}

Json task_field_to_json(const TaskField& field) {
  Json blocks = Json::array();
  for (Index k = 0; k < field.agents(); ++k) {
    const auto b = field.block(k);
    blocks.push_back(std::vector<double>(b.begin(), b.end()));
  }
  Json m = field.has_uniform_blocks() && field.agents() > 0 ? Json(field.block_size(0)) : Json(nullptr);
  return {{"M", m}, {"blocks", blocks}};
}

TaskField task_field_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array()) {
    throw ConfigError("task field json: expected {\"M\": M, \"blocks\": [[...], ...]}");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "M" && key != "blocks") throw ConfigError("task field json: unknown key '" + key + "'");
  }
  std::vector<Eigen::VectorXd> blocks;
  for (const auto& b : doc["blocks"]) {
    if (!b.is_array() || b.empty()) throw ConfigError("task field json: blocks must be nonempty arrays");
    Eigen::VectorXd v(static_cast<Index>(b.size()));
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_number()) throw ConfigError("task field json: block entries must be numbers");
      v(static_cast<Index>(j)) = b[j].get<double>();
    }
    blocks.push_back(std::move(v));
  }
  if (blocks.empty()) throw ConfigError("task field json: no blocks");
  TaskField field = TaskField::from_blocks(blocks);
  if (doc.contains("M") && !doc["M"].is_null()) {
    if (!doc["M"].is_number_integer() || !field.has_uniform_blocks() ||
        field.block_size(0) != doc["M"].get<Index>()) {
      throw ConfigError("task field json: M does not match the block lengths");
    }
  }
  return field;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace netmtl
