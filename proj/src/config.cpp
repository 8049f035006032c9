#include "netmtl/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <map>
#include <set>

#include "netmtl/combination.hpp"
#include "netmtl/error.hpp"

namespace netmtl {

namespace {

using Keys = std::set<std::string>;

void check_keys(const Json& obj, const Keys& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return obj[key];
}

double number(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = require_key(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

Index integer(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = require_key(obj, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<Index>();
}

Index integer_or(const Json& obj, const std::string& key, Index fallback, const std::string& where) {
  return obj.contains(key) ? integer(obj, key, where) : fallback;
}

std::string text(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = require_key(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<Index> index_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of integers");
  std::vector<Index> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError(where + ": expected an array of integers");
    out.push_back(x.get<Index>());
  }
  return out;
}

Eigen::VectorXd vector_of(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!v[j].is_number()) throw ConfigError(where + ": expected an array of numbers");
    out(static_cast<Index>(j)) = v[j].get<double>();
  }
  return out;
}

Eigen::MatrixXd matrix_of(const Json& v, const std::string& where) {
  if (v.is_number()) return Eigen::MatrixXd::Constant(1, 1, v.get<double>());
  if (!v.is_array() || v.empty() || !v[0].is_array()) throw ConfigError(where + ": expected a matrix (array of rows)");
  const std::size_t cols = v[0].size();
  Eigen::MatrixXd out(static_cast<Index>(v.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(where + ": rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) throw ConfigError(where + ": matrix entries must be numbers");
      out(static_cast<Index>(i), static_cast<Index>(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

std::filesystem::path resolve(const ExperimentConfig& config, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !config.base_dir.empty()) path = config.base_dir / path;
  return path;
}

std::uint64_t derived_seed(const ExperimentConfig& config, const Json& obj, StreamTag tag) {
  if (obj.contains("seed")) return obj["seed"].get<std::uint64_t>();
  return Rng::stream(config.seed, tag).engine()();
}

const std::map<std::string, Keys> kGraphKeys = {
    {"random_geometric", {"kind", "n", "radius", "sigma", "seed"}},
    {"ring", {"kind", "n", "weight"}},
    {"path", {"kind", "n", "weight"}},
    {"complete", {"kind", "n", "weight"}},
    {"star", {"kind", "leaves", "weight"}},
    {"file", {"kind", "path"}},
    {"explicit", {"kind", "n", "edges"}},
};

const std::map<std::string, Keys> kTaskKeys = {
    {"smooth", {"kind", "bandwidth", "bandwidth_index", "amplitude", "seed"}},
    {"common", {"kind", "value", "seed"}},
    {"random", {"kind", "scale", "seed"}},
    {"clustered", {"kind", "sizes", "scale", "seed"}},
    {"overlapping_global", {"kind", "scale", "seed"}},
    {"explicit", {"kind", "M", "blocks"}},
    {"file", {"kind", "path"}},
};

const std::map<StrategyKind, Keys> kPayloadKeys = {
    {StrategyKind::noncooperative, {}},
    {StrategyKind::diffusion, {"combination"}},
    {StrategyKind::laplacian_reg, {}},
    {StrategyKind::spectral_reg, {"kernel"}},
    {StrategyKind::prox_l1, {"rho", "weights"}},
    {StrategyKind::subspace_projection, {"subspace", "combination"}},
    {StrategyKind::overlapping, {"variables", "interests", "weights"}},
    {StrategyKind::clustered, {"clusters", "penalty", "rho"}},
};

bool is_seed(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void validate_graph_section(const Json& g) {
  const std::string kind = text(g, "kind", "graph");
  const auto it = kGraphKeys.find(kind);
  if (it == kGraphKeys.end()) throw ConfigError("graph: unknown kind '" + kind + "'");
  check_keys(g, it->second, "graph");
  if (kind == "random_geometric") {
    if (integer(g, "n", "graph") < 1) throw ConfigError("graph.n: must be positive");
    if (!(number(g, "radius", "graph") > 0.0)) throw ConfigError("graph.radius: must be positive");
    if (g.contains("sigma") && !(number(g, "sigma", "graph") > 0.0)) throw ConfigError("graph.sigma: must be positive");
    if (g.contains("seed") && !is_seed(g["seed"])) throw ConfigError("graph.seed: expected an unsigned integer");
  } else if (kind == "star") {
    if (integer(g, "leaves", "graph") < 1) throw ConfigError("graph.leaves: must be positive");
  } else if (kind == "file") {
    text(g, "path", "graph");
  } else if (kind != "explicit") {
    if (integer(g, "n", "graph") < 1) throw ConfigError("graph.n: must be positive");
  }
}

void validate_model_section(const Json& m) {
  const std::string kind = text(m, "kind", "model");
  if (kind == "mse") {
    check_keys(m, {"kind", "M", "Ru", "noise"}, "model");
  } else if (kind == "logistic") {
    check_keys(m, {"kind", "M", "Ru", "rho"}, "model");
    if (number_or(m, "rho", 0.0, "model") < 0.0) throw ConfigError("model.rho: must be nonnegative");
  } else {
    throw ConfigError("model: unknown kind '" + kind + "'");
  }
  if (m.contains("M") && integer(m, "M", "model") < 1) throw ConfigError("model.M: must be positive");
}

void validate_tasks_section(const Json& t) {
  const std::string kind = text(t, "kind", "tasks");
  const auto it = kTaskKeys.find(kind);
  if (it == kTaskKeys.end()) throw ConfigError("tasks: unknown kind '" + kind + "'");
  check_keys(t, it->second, "tasks");
  if (t.contains("seed") && !is_seed(t["seed"])) throw ConfigError("tasks.seed: expected an unsigned integer");
  if (kind == "smooth") {
    if (t.contains("bandwidth") == t.contains("bandwidth_index")) {
      throw ConfigError("tasks: smooth tasks need exactly one of 'bandwidth' or 'bandwidth_index'");
    }
    if (t.contains("amplitude")) {
      const std::string a = text(t, "amplitude", "tasks");
      if (a != "inverse" && a != "flat") throw ConfigError("tasks.amplitude: expected 'inverse' or 'flat'");
    }
  }
}

void validate_strategy_section(const Json& s) {
  check_keys(s, {"kind", "mu", "eta", "payload"}, "strategy");
  const StrategyKind kind = parse_strategy_kind(text(s, "kind", "strategy"));
  if (!(number(s, "mu", "strategy") > 0.0)) throw ConfigError("strategy.mu: must be positive");
  if (s.contains("eta") && !(number(s, "eta", "strategy") >= 0.0)) throw ConfigError("strategy.eta: must be nonnegative");
  if (s.contains("payload")) check_keys(s["payload"], kPayloadKeys.at(kind), "strategy.payload");
}

}  // namespace

ExperimentConfig parse_config(const Json& doc, std::filesystem::path base_dir) {
  check_keys(doc, {"schema", "description", "graph", "model", "tasks", "strategy", "iters", "runs", "seed", "window",
                   "parallel", "decimate", "eta_grid", "output", "init"},
             "config");
  if (!doc.contains("schema") || !doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1) {
    throw ConfigError("config: 'schema' must be 1");
  }
  ExperimentConfig c;
  c.document = doc;
  c.base_dir = std::move(base_dir);
  validate_graph_section(require_key(doc, "graph", "config"));
  validate_model_section(require_key(doc, "model", "config"));
  validate_tasks_section(require_key(doc, "tasks", "config"));
  validate_strategy_section(require_key(doc, "strategy", "config"));

  c.iters = integer_or(doc, "iters", c.iters, "config");
  c.runs = integer_or(doc, "runs", c.runs, "config");
  if (doc.contains("seed") && !is_seed(doc["seed"])) throw ConfigError("config.seed: expected an unsigned integer");
  c.seed = doc.value("seed", c.seed);
  c.window = number_or(doc, "window", c.window, "config");
  c.decimate = integer_or(doc, "decimate", c.decimate, "config");
  c.init = number_or(doc, "init", c.init, "config");
  if (doc.contains("parallel")) {
    c.parallel = static_cast<int>(integer(doc, "parallel", "config"));
  } else if (const char* env = std::getenv("NETMTL_PARALLEL")) {
    c.parallel = std::max(1, std::atoi(env));
  }
  if (doc.contains("eta_grid")) {
    const Eigen::VectorXd g = vector_of(doc["eta_grid"], "config.eta_grid");
    c.eta_grid.assign(g.data(), g.data() + g.size());
    for (double e : c.eta_grid) {
      if (!(e >= 0.0)) throw ConfigError("config.eta_grid: values must be nonnegative");
    }
  }
  if (doc.contains("output")) {
    check_keys(doc["output"], {"dir", "prefix"}, "config.output");
    if (doc["output"].contains("dir")) c.output_dir = text(doc["output"], "dir", "config.output");
    if (doc["output"].contains("prefix")) c.output_prefix = text(doc["output"], "prefix", "config.output");
  }
  if (c.iters < 1) throw ConfigError("config.iters: T must be >= 1");
  if (c.runs < 1) throw ConfigError("config.runs: R must be >= 1");
  if (!(c.window > 0.0 && c.window <= 1.0)) throw ConfigError("config.window: fraction must lie in (0, 1]");
  if (c.parallel < 1) throw ConfigError("config.parallel: must be >= 1");
  if (c.decimate < 1) throw ConfigError("config.decimate: must be >= 1");

  Json& d = c.document;
  d["iters"] = c.iters;
  d["runs"] = c.runs;
  d["seed"] = c.seed;
  d["window"] = c.window;
  d["decimate"] = c.decimate;
  d["init"] = c.init;
  d["parallel"] = c.parallel;
  if (!d["strategy"].contains("eta")) d["strategy"]["eta"] = 0.0;
  if (!d["strategy"].contains("payload")) d["strategy"]["payload"] = Json::object();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config file '" + path.string() + "' not found");
  return parse_config(read_json_file(path), path.parent_path());
}

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
  Json& d = c.document;
  if (o.seed) {
    c.seed = *o.seed;
    d["seed"] = c.seed;
  }
  if (o.mu) {
    if (!(*o.mu > 0.0)) throw ConfigError("--mu: must be positive");
    d["strategy"]["mu"] = *o.mu;
  }
  if (o.eta) {
    if (!(*o.eta >= 0.0)) throw ConfigError("--eta: must be nonnegative");
    d["strategy"]["eta"] = *o.eta;
  }
  if (o.iters) {
    if (*o.iters < 1) throw ConfigError("--iters: must be >= 1");
    c.iters = *o.iters;
    d["iters"] = c.iters;
  }
  if (o.runs) {
    if (*o.runs < 1) throw ConfigError("--runs: must be >= 1");
    c.runs = *o.runs;
    d["runs"] = c.runs;
  }
  if (o.parallel) {
    if (*o.parallel < 1) throw ConfigError("--parallel: must be >= 1");
    c.parallel = *o.parallel;
    d["parallel"] = c.parallel;
  }
  if (o.output_dir) {
    c.output_dir = *o.output_dir;
    d["output"]["dir"] = c.output_dir;
  }
}

std::string config_hash(const ExperimentConfig& config) {
  Json d = config.document;
  d.erase("parallel");
  d.erase("output");
  d.erase("description");
  const std::string canon = d.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Builders

Graph build_graph(const ExperimentConfig& config) {
  const Json& g = config.document["graph"];
  const std::string kind = g["kind"].get<std::string>();
  const double weight = number_or(g, "weight", 1.0, "graph");
  if (kind == "random_geometric") {
    Rng rng(derived_seed(config, g, StreamTag::graph));
    const double radius = number(g, "radius", "graph");
    return random_geometric_graph(integer(g, "n", "graph"), radius, number_or(g, "sigma", radius, "graph"), rng).graph;
  }
  if (kind == "ring") return ring_graph(integer(g, "n", "graph"), weight);
  if (kind == "path") return path_graph(integer(g, "n", "graph"), weight);
  if (kind == "complete") return complete_graph(integer(g, "n", "graph"), weight);
  if (kind == "star") return star_graph(integer(g, "leaves", "graph"), weight);
  if (kind == "file") return graph_from_json(read_json_file(resolve(config, text(g, "path", "graph"))));
  Json doc = g;
  doc.erase("kind");
  return graph_from_json(doc);
}

namespace {

Index model_block_size(const Json& m) { return integer_or(m, "M", 1, "model"); }

TaskField build_tasks(const ExperimentConfig& config, const Graph& graph, const Spectrum& spectrum) {
  const Json& t = config.document["tasks"];
  const Json& m = config.document["model"];
  const std::string kind = t["kind"].get<std::string>();
  const Index n = graph.size();
  const Index mm = model_block_size(m);
  Rng rng(derived_seed(config, t, StreamTag::tasks));
  const double scale = number_or(t, "scale", 1.0, "tasks");

  if (kind == "smooth") {
    double bandwidth = 0.0;
    if (t.contains("bandwidth")) {
      bandwidth = number(t, "bandwidth", "tasks");
    } else {
      const Index idx = integer(t, "bandwidth_index", "tasks");
      if (idx < 1 || idx > n) throw ConfigError("tasks.bandwidth_index: must lie in [1, N]");
      bandwidth = spectrum.eigenvalue(idx - 1);
    }
    const bool flat = t.value("amplitude", std::string("inverse")) == "flat";
    return synth_smooth_tasks(spectrum, mm, bandwidth, rng,
                              flat ? AmplitudeProfile([](double) { return 1.0; }) : AmplitudeProfile(default_amplitude));
  }
  if (kind == "common") {
    Eigen::VectorXd v(mm);
    if (t.contains("value")) {
      v = vector_of(t["value"], "tasks.value");
      if (v.size() != mm) throw ConfigError("tasks.value: length must equal M");
    } else {
      for (Index j = 0; j < mm; ++j) v(j) = rng.normal();
    }
    TaskField f = TaskField::uniform(n, mm);
    for (Index k = 0; k < n; ++k) f.block(k) = v;
    return f;
  }
  if (kind == "random") {
    TaskField f = TaskField::uniform(n, mm);
    for (Index i = 0; i < f.total_size(); ++i) f.stacked()(i) = scale * rng.normal();
    return f;
  }
  if (kind == "clustered") {
    const ClusterPartition part(index_list(require_key(t, "sizes", "tasks"), "tasks.sizes"));
    if (part.agents() != n) throw ConfigError("tasks.sizes: cluster sizes must sum to N");
    TaskField f = TaskField::uniform(n, mm);
    for (Index q = 0; q < part.clusters(); ++q) {
      Eigen::VectorXd v(mm);
      for (Index j = 0; j < mm; ++j) v(j) = scale * rng.normal();
      for (Index k = part.first(q); k < part.first(q) + part.size(q); ++k) f.block(k) = v;
    }
    return f;
  }
  if (kind == "overlapping_global") {
    const Json& s = config.document["strategy"];
    if (s["kind"] != "overlapping") throw ConfigError("tasks: overlapping_global requires the overlapping strategy");
    const Json& p = s["payload"];
    const Index vars = integer(p, "variables", "strategy.payload");
    Eigen::VectorXd global(vars);
    for (Index j = 0; j < vars; ++j) global(j) = scale * rng.normal();
    std::vector<Eigen::VectorXd> blocks;
    for (const auto& list : require_key(p, "interests", "strategy.payload")) {
      const auto idx = index_list(list, "strategy.payload.interests");
      Eigen::VectorXd b(static_cast<Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= vars) throw ConfigError("strategy.payload.interests: variable out of range");
        b(static_cast<Index>(j)) = global(idx[j]);
      }
      blocks.push_back(std::move(b));
    }
    if (static_cast<Index>(blocks.size()) != n) throw ConfigError("strategy.payload.interests: one list per agent");
    return TaskField::from_blocks(blocks);
  }
  Json doc;
  if (kind == "file") {
    doc = read_json_file(resolve(config, text(t, "path", "tasks")));
  } else {
    doc = t;
    doc.erase("kind");
  }
  TaskField f = task_field_from_json(doc);
  if (f.agents() != n) throw ConfigError("tasks: task field has " + std::to_string(f.agents()) + " blocks for " +
                                         std::to_string(n) + " agents");
  return f;
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& config) {
  Graph graph = build_graph(config);
  Spectrum spectrum(graph);
  TaskField truth = build_tasks(config, graph, spectrum);
  const Json& m = config.document["model"];
  if (m.contains("M") && !truth.has_uniform_blocks()) throw ConfigError("model.M: tasks have unequal block lengths");
  if (m.contains("M") && truth.uniform_block_size() != integer(m, "M", "model")) {
    throw ConfigError("model.M: does not match the task block length");
  }
  const Eigen::MatrixXd ru = m.contains("Ru") ? matrix_of(m["Ru"], "model.Ru") : Eigen::MatrixXd::Identity(1, 1);
  const Index n = graph.size();
  if (m["kind"] == "mse") {
    std::vector<double> noise;
    const Json nz = m.contains("noise") ? m["noise"] : Json(0.1);
    if (nz.is_number()) {
      noise.assign(static_cast<std::size_t>(n), nz.get<double>());
    } else {
      const Eigen::VectorXd v = vector_of(nz, "model.noise");
      noise.assign(v.data(), v.data() + v.size());
    }
    StreamModel model = StreamModel::mse(std::move(truth), ru, std::move(noise));
    return {std::move(graph), std::move(spectrum), std::move(model)};
  }
  StreamModel model = StreamModel::logistic(std::move(truth), ru, number_or(m, "rho", 0.0, "model"));
  return {std::move(graph), std::move(spectrum), std::move(model)};
}

namespace {

CombinationMatrix combination_from(const Json& v, const Graph& graph, const std::vector<Index>& sizes,
                                   const std::optional<Subspace>& subspace, const std::string& where) {
  if (v.is_string()) {
    const std::string rule = v.get<std::string>();
    if (rule == "metropolis") return metropolis_weights(graph);
    if (rule == "laplacian") return laplacian_rule_weights(graph);
    if (rule == "projector") {
      if (!subspace) throw ConfigError(where + ": 'projector' needs a subspace");
      const Eigen::MatrixXd p = projector(*subspace);
      if (subspace->scalar_basis()) {
        const Eigen::MatrixXd& u = *subspace->scalar_basis();
        return CombinationMatrix::scalar(u * (u.transpose() * u).inverse() * u.transpose());
      }
      return CombinationMatrix::blocks(p, sizes);
    }
    throw ConfigError(where + ": unknown rule '" + rule + "'");
  }
  if (v.is_object()) {
    check_keys(v, {"rule", "clusters"}, where);
    if (text(v, "rule", where) != "cluster_metropolis") throw ConfigError(where + ": unknown rule");
    return cluster_metropolis_weights(graph, ClusterPartition(index_list(require_key(v, "clusters", where), where)));
  }
  const Eigen::MatrixXd a = matrix_of(v, where);
  if (a.rows() == graph.size()) return CombinationMatrix::scalar(a);
  return CombinationMatrix::blocks(a, sizes);
}

SpectralKernel kernel_from(const Json& k, const Spectrum& spectrum) {
  const std::string where = "strategy.payload.kernel";
  if (k.is_array()) {
    const Eigen::VectorXd beta = vector_of(k, where);
    return SpectralKernel::polynomial(std::vector<double>(beta.data(), beta.data() + beta.size()), spectrum);
  }
  check_keys(k, {"coefficients", "power", "function", "scale", "exponent", "degree"}, where);
  if (k.contains("coefficients")) {
    const Eigen::VectorXd beta = vector_of(k["coefficients"], where + ".coefficients");
    return SpectralKernel::polynomial(std::vector<double>(beta.data(), beta.data() + beta.size()), spectrum);
  }
  if (k.contains("power")) {
    const Index p = integer(k, "power", where);
    if (p < 0) throw ConfigError(where + ".power: must be >= 0");
    std::vector<double> beta(static_cast<std::size_t>(p + 1), 0.0);
    beta.back() = 1.0;
    return SpectralKernel::polynomial(std::move(beta), spectrum);
  }
  const std::string fn = text(k, "function", where);
  const int degree = static_cast<int>(integer(k, "degree", where));
  if (fn == "exp") {
    const double t = number_or(k, "scale", 1.0, where);
    return SpectralKernel::function([t](double x) { return std::expm1(t * x); }, degree, spectrum);
  }
  if (fn == "power") {
    const double e = number(k, "exponent", where);
    if (!(e > 0.0)) throw ConfigError(where + ".exponent: must be positive");
    return SpectralKernel::function([e](double x) { return std::pow(std::max(x, 0.0), e); }, degree, spectrum);
  }
  throw ConfigError(where + ".function: unknown '" + fn + "'");
}

Subspace subspace_from(const Json& s, const Scenario& sc) {
  const std::string where = "strategy.payload.subspace";
  check_keys(s, {"type", "sizes", "c", "basis"}, where);
  const std::string type = text(s, "type", where);
  const Index mm = sc.model.truth().uniform_block_size();
  if (type == "consensus") return consensus_subspace(sc.graph.size(), mm);
  if (type == "clusters") {
    const ClusterPartition part(index_list(require_key(s, "sizes", where), where + ".sizes"));
    if (part.agents() != sc.graph.size()) throw ConfigError(where + ".sizes: must sum to N");
    return cluster_subspace(part, mm);
  }
  if (type == "laplacian") return laplacian_subspace(sc.spectrum, integer(s, "c", where), mm);
  if (type == "explicit") {
    const Eigen::MatrixXd u = matrix_of(require_key(s, "basis", where), where + ".basis");
    if (u.rows() != sc.graph.size()) throw ConfigError(where + ".basis: needs N rows");
    return Subspace::kronecker(u, mm);
  }
  throw ConfigError(where + ".type: unknown '" + type + "'");
}

}  // namespace

StrategyConfig build_strategy_config(const ExperimentConfig& config, const Scenario& sc) {
  const Json& s = config.document["strategy"];
  const Json& p = s["payload"];
  const std::string where = "strategy.payload";
  StrategyConfig out;
  out.kind = parse_strategy_kind(s["kind"].get<std::string>());
  out.mu = s["mu"].get<double>();
  out.eta = s["eta"].get<double>();
  const auto& sizes = sc.model.truth().block_sizes();
  switch (out.kind) {
    case StrategyKind::noncooperative:
    case StrategyKind::laplacian_reg:
      break;
    case StrategyKind::diffusion:
      out.combination = combination_from(p.value("combination", Json("metropolis")), sc.graph, sizes, std::nullopt,
                                         where + ".combination");
      break;
    case StrategyKind::spectral_reg:
      out.kernel = kernel_from(require_key(p, "kernel", where), sc.spectrum);
      break;
    case StrategyKind::prox_l1:
      if (p.contains("weights")) {
        out.regularizer = EdgeRegularizer(sc.graph, matrix_of(p["weights"], where + ".weights"), PenaltyKind::l1);
      } else {
        out.regularizer = EdgeRegularizer::uniform(sc.graph, number_or(p, "rho", 1.0, where), PenaltyKind::l1);
      }
      break;
    case StrategyKind::subspace_projection: {
      out.subspace = subspace_from(p.value("subspace", Json{{"type", "consensus"}}), sc);
      out.combination = combination_from(p.value("combination", Json("metropolis")), sc.graph, sizes, out.subspace,
                                         where + ".combination");
      break;
    }
    case StrategyKind::overlapping: {
      const Index vars = integer(p, "variables", where);
      std::vector<std::vector<Index>> interests;
      for (const auto& list : require_key(p, "interests", where)) {
        interests.push_back(index_list(list, where + ".interests"));
      }
      if (p.contains("weights") && p["weights"] != "metropolis") {
        throw ConfigError(where + ".weights: only 'metropolis' is supported");
      }
      out.overlap = OverlapWeights::metropolis(sc.graph, std::move(interests), vars);
      break;
    }
    case StrategyKind::clustered: {
      ClusterPartition part(index_list(require_key(p, "clusters", where), where + ".clusters"));
      if (part.agents() != sc.graph.size()) throw ConfigError(where + ".clusters: must sum to N");
      out.combination = cluster_metropolis_weights(sc.graph, part);
      const std::string penalty = p.value("penalty", std::string("l1"));
      if (penalty != "none") {
        PenaltyKind pk = PenaltyKind::l1;
        if (penalty == "quadratic") {
          pk = PenaltyKind::quadratic;
        } else if (penalty != "l1") {
          throw ConfigError(where + ".penalty: expected 'l1', 'quadratic' or 'none'");
        }
        out.regularizer = EdgeRegularizer::inter_cluster(sc.graph, part, number_or(p, "rho", 1.0, where), pk);
      }
      out.partition = std::move(part);
      break;
    }
  }
  return out;
}

Strategy build_strategy(const ExperimentConfig& config, const Scenario& scenario, std::optional<double> eta) {
  StrategyConfig sc = build_strategy_config(config, scenario);
  if (eta) sc.eta = *eta;
  return Strategy(scenario.graph, std::move(sc), scenario.model.truth().block_sizes());
}

}  // namespace netmtl
