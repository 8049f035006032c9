// netmtl: run, theory, sweep, gen-graph, gen-tasks, check.
//
// Exit codes: 0 ok, 1 internal error, 2 invalid configuration,
// 3 divergence, 4 I/O, 5 failed self-check.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "netmtl/checks.hpp"
#include "netmtl/config.hpp"
#include "netmtl/error.hpp"
#include "netmtl/harness.hpp"
#include "netmtl/io.hpp"

using namespace netmtl;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu;
  std::optional<double> eta;
  std::optional<Index> iters;
  std::optional<Index> runs;
  std::optional<int> parallel;
  bool json = false;
};

void add_common(CLI::App* cmd, Options& o, bool overrides) {
  cmd->add_option("--config", o.config, "experiment config (JSON)")->required();
  if (!overrides) return;
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--mu", o.mu, "step size");
  cmd->add_option("--eta", o.eta, "regularization strength");
  cmd->add_option("--iters", o.iters, "iterations T");
  cmd->add_option("--runs", o.runs, "Monte Carlo runs R");
  cmd->add_option("--parallel", o.parallel, "worker threads (default: $NETMTL_PARALLEL or 1)");
}

ExperimentConfig load(const Options& o) {
  ExperimentConfig c = load_config(o.config);
  Overrides ov;
  ov.seed = o.seed;
  ov.mu = o.mu;
  ov.eta = o.eta;
  ov.iters = o.iters;
  ov.runs = o.runs;
  ov.parallel = o.parallel;
  if (!o.out.empty()) ov.output_dir = o.out;
  apply_overrides(c, ov);
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_run(const Options& o) {
  const ExperimentConfig c = load(o);
  const ExperimentResult res = run_experiment(c);
  const auto files = write_result(res, c.output_dir, c.output_prefix);
  std::fprintf(stderr, "steady-state msd = %.6e +- %.2e over the last %lld iterations (%.2f s)\n",
               res.steady_wo.mean, res.steady_wo.std_error, static_cast<long long>(res.steady_wo.window),
               res.wall_seconds);
  if (res.steady_wo.nonstationary) std::fprintf(stderr, "warning: msd did not settle inside the window\n");
  for (const auto& c2 : compare_theory(res, 0.15)) {
    if (c2.status == CompareStatus::skipped) continue;
    std::fprintf(stderr, "%s: simulated %.6e, theory %.6e, relative error %.2f%%\n", c2.metric.c_str(), c2.simulated,
                 c2.theory, 100.0 * c2.relative_error);
  }
  for (const auto& f : files) std::fprintf(stderr, "wrote %s\n", f.string().c_str());
  return 0;
}

int cmd_theory(const Options& o) {
  const ExperimentConfig c = load(o);
  const Scenario sc = build_scenario(c);
  const Strategy strategy = build_strategy(c, sc);
  theory_inputs(sc, strategy);  // applicability precondition
  std::cout << theory_to_json(predict(sc, strategy)).dump(2) << "\n";
  return 0;
}

int cmd_sweep(const Options& o, std::vector<double> grid) {
  const ExperimentConfig c = load(o);
  if (grid.empty()) grid = c.eta_grid;
  if (grid.empty()) {
    const Scenario sc = build_scenario(c);
    grid.push_back(0.0);
    for (int p = -3; p <= 3; ++p) {
      const double eta = std::pow(10.0, p);
      try {
        build_strategy(c, sc, eta);
        grid.push_back(eta);
      } catch (const ConfigError& e) {
        std::fprintf(stderr, "skipping eta=%g: %s\n", eta, e.what());
      }
    }
  }
  const SweepResult sweep = eta_sweep(c, grid);
  const std::string csv = sweep_csv(sweep);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) throw IoError("cannot create '" + o.out + "': " + ec.message());
    const auto path = std::filesystem::path(o.out) / (c.output_prefix + "_sweep.csv");
    write_text_file(path, csv);
    std::fprintf(stderr, "wrote %s\n", path.string().c_str());
  }
  const SweepRow& best = sweep.rows[sweep.argmin];
  std::fprintf(stderr, "min simulated msd %.6e at eta=%g\n", best.msd_sim, best.eta);
  return 0;
}

int cmd_gen_graph(const Options& o) {
  const ExperimentConfig c = load(o);
  emit(o.out, graph_to_json(build_graph(c)).dump(2) + "\n");
  return 0;
}

int cmd_gen_tasks(const Options& o) {
  const ExperimentConfig c = load(o);
  emit(o.out, task_field_to_json(build_scenario(c).model.truth()).dump(2) + "\n");
  return 0;
}

int cmd_check(const Options& o) {
  const ExperimentConfig c = load(o);
  const auto checks = structural_checks(c);
  bool ok = true;
  Json list = Json::array();
  for (const auto& ch : checks) {
    ok = ok && ch.passed;
    std::fprintf(stderr, "[%s] %s%s%s\n", ch.passed ? "PASS" : "FAIL", ch.name.c_str(), ch.detail.empty() ? "" : ": ",
                 ch.detail.c_str());
    list.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  }
  if (o.json) std::cout << Json{{"passed", ok}, {"checks", list}}.dump(2) << "\n";
  return ok ? 0 : 5;
}

int fail(int code, const char* kind, const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n') ch = ' ';
  }
  std::fprintf(stderr, "netmtl: error[%s]: %s\n", kind, flat.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multitask adaptation over graphs: simulation, theory and self-checks"};
  app.require_subcommand(1);
  Options o;
  std::vector<double> grid;

  auto* run = app.add_subcommand("run", "run an experiment, write CSV and JSON sidecar");
  add_common(run, o, true);
  run->add_option("--out", o.out, "output directory");
  auto* theory = app.add_subcommand("theory", "print closed-form predictions as JSON");
  add_common(theory, o, true);
  auto* sweep = app.add_subcommand("sweep", "eta sweep table");
  add_common(sweep, o, true);
  sweep->add_option("--out", o.out, "output directory (stdout when omitted)");
  sweep->add_option("--grid", grid, "eta values")->delimiter(',');
  auto* gg = app.add_subcommand("gen-graph", "write the configured graph as JSON");
  add_common(gg, o, true);
  gg->add_option("--out", o.out, "output file (stdout when omitted)");
  auto* gt = app.add_subcommand("gen-tasks", "write the configured task field as JSON");
  add_common(gt, o, true);
  gt->add_option("--out", o.out, "output file (stdout when omitted)");
  auto* check = app.add_subcommand("check", "structural self-checks");
  add_common(check, o, true);
  check->add_flag("--json", o.json, "print results as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    if (*run) return cmd_run(o);
    if (*theory) return cmd_theory(o);
    if (*sweep) return cmd_sweep(o, grid);
    if (*gg) return cmd_gen_graph(o);
    if (*gt) return cmd_gen_tasks(o);
    if (*check) return cmd_check(o);
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const DivergenceError& e) {
    return fail(3, "divergence", e.what());
  } catch (const IoError& e) {
    return fail(4, "io", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 1;
}
