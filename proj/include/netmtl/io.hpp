#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "netmtl/graph.hpp"
#include "netmtl/task_field.hpp"

namespace netmtl {

using Json = nlohmann::json;

/// {"n": N, "edges": [[k, l, c_kl], ...]}, 0-based, each edge once.
Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& doc);

/// {"M": M, "blocks": [[...], ...]}. M is null for unequal block lengths.
Json task_field_to_json(const TaskField& field);
TaskField task_field_from_json(const Json& doc);

/// Throws IoError when the file is unreadable and ConfigError on bad JSON.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace netmtl
