#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "netmtl/data.hpp"
#include "netmtl/graph.hpp"
#include "netmtl/io.hpp"
#include "netmtl/spectrum.hpp"
#include "netmtl/strategies.hpp"

namespace netmtl {

/// Validated experiment description. `document` is the effective JSON
/// (defaults filled in, overrides applied); the typed fields mirror it.
struct ExperimentConfig {
  Json document;
  std::filesystem::path base_dir;  // relative file paths resolve here
  Index iters = 1000;
  Index runs = 1;
  std::uint64_t seed = 1;
  double window = 0.1;
  int parallel = 1;
  Index decimate = 1;
  double init = 0.0;
  std::vector<double> eta_grid;
  std::string output_dir = ".";
  std::string output_prefix = "result";

  double mu() const { return document["strategy"]["mu"].get<double>(); }
  double eta() const { return document["strategy"]["eta"].get<double>(); }
  StrategyKind kind() const { return parse_strategy_kind(document["strategy"]["kind"].get<std::string>()); }
};

/// Checks the schema (version 1, no unknown keys, value ranges) and fills
/// defaults. Throws ConfigError.
ExperimentConfig parse_config(const Json& doc, std::filesystem::path base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> mu;
  std::optional<double> eta;
  std::optional<Index> iters;
  std::optional<Index> runs;
  std::optional<int> parallel;
  std::optional<std::string> output_dir;
};

/// Flag values win over the file; the effective document is updated too.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// FNV-1a of the canonical effective document, excluding execution-only
/// keys (parallel, output). Hex string.
std::string config_hash(const ExperimentConfig& config);

/// Graph, its spectrum, and the stream model with its true task field.
struct Scenario {
  Graph graph;
  Spectrum spectrum;
  StreamModel model;
};

Graph build_graph(const ExperimentConfig& config);
Scenario build_scenario(const ExperimentConfig& config);

/// Strategy payload objects without the construction-time validation, so
/// callers can inspect an infeasible configuration.
StrategyConfig build_strategy_config(const ExperimentConfig& config, const Scenario& scenario);
/// Validated strategy; `eta` replaces the configured value when given.
Strategy build_strategy(const ExperimentConfig& config, const Scenario& scenario,
                        std::optional<double> eta = std::nullopt);

}  // namespace netmtl
