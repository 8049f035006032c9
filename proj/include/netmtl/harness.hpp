#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netmtl/config.hpp"
#include "netmtl/theory.hpp"

namespace netmtl {

struct SteadyState {
  double mean = 0.0;
  double std_error = 0.0;  // across runs
  bool nonstationary = false;
  Index window = 0;
};

/// Mean over the last ceil(fraction * T) iterations of each run (rows are
/// runs), averaged across runs, with the across-run standard error. The
/// nonstationarity flag compares the two halves of the run-averaged window.
SteadyState steady_state(const Eigen::MatrixXd& runs, double fraction);
SteadyState steady_state(const Eigen::VectorXd& trajectory, double fraction);
/// Explicit window length; throws ConfigError when it exceeds T.
SteadyState steady_state_window(const Eigen::MatrixXd& runs, Index window);

/// Closed-form predictions attached to a result; absent entries do not
/// apply to the configuration.
struct TheoryReport {
  std::optional<NoncooperativeMsd> noncooperative;
  std::optional<ModeBreakdown> variance;
  std::optional<BiasResult> bias;
  std::optional<double> msd_projection;
  std::optional<Eigen::VectorXd> filter_ratios;
  std::string notice;
};

/// True for mse models with one R_u and block length shared by all agents.
bool theory_applicable(const Scenario& scenario);
/// Throws ConfigError when theory does not apply.
TheoryInputs theory_inputs(const Scenario& scenario, const Strategy& strategy);
TheoryReport predict(const Scenario& scenario, const Strategy& strategy);
Json theory_to_json(const TheoryReport& report);

/// W* the iterates should settle around: W^o (noncooperative), the
/// smoothness optimum (laplacian/spectral), or the weighted projection of
/// W^o onto the constraint subspace (diffusion, subspace, clustered with
/// eta = 0). Empty when no closed form applies.
std::optional<TaskField> optimum_for(const Scenario& scenario, const Strategy& strategy);

struct ExperimentResult {
  Eigen::VectorXd msd_wo;     // per iteration, averaged over runs
  Eigen::VectorXd stderr_wo;  // across-run standard error per iteration
  Eigen::VectorXd msd_wstar;  // empty when W* is unavailable
  Eigen::MatrixXd runs_wo;    // R x T
  Eigen::MatrixXd runs_wstar;
  SteadyState steady_wo;
  std::optional<SteadyState> steady_wstar;
  Eigen::VectorXd agent_msd;  // steady-state per agent
  std::optional<TaskField> optimum;
  std::optional<double> optimum_gap;  // ||W^o - W*||^2
  TheoryReport theory;
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_seconds = 0.0;
  Index decimate = 1;
  Json effective_config;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
/// Runs on a prebuilt scenario and strategy (shared across a sweep).
ExperimentResult run_experiment(const ExperimentConfig& config, const Scenario& scenario, const Strategy& strategy);

/// `iter,msd_wo,msd_wstar,stderr`, every `decimate`-th iteration plus the last.
std::string result_csv(const ExperimentResult& result);
Json result_sidecar(const ExperimentResult& result);
/// Writes <dir>/<prefix>.csv and <dir>/<prefix>.json; returns both paths.
std::vector<std::filesystem::path> write_result(const ExperimentResult& result, const std::filesystem::path& dir,
                                                const std::string& prefix);

struct SweepRow {
  double eta = 0.0;
  double msd_sim = 0.0;
  double msd_stderr = 0.0;
  std::optional<double> var_sim;
  std::optional<double> var_theory;
  std::optional<double> bias_theory;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t argmin = 0;  // row with the smallest simulated MSD
};

/// One experiment per grid value on a shared graph and W^o.
SweepResult eta_sweep(const ExperimentConfig& config, const std::vector<double>& grid);
/// `eta,msd_sim,var_sim,var_theory,bias_theory`.
std::string sweep_csv(const SweepResult& sweep);

enum class CompareStatus { pass, fail, skipped };

struct Comparison {
  std::string metric;
  double simulated = 0.0;
  double theory = 0.0;
  double tolerance = 0.0;
  double relative_error = 0.0;
  double margin = 0.0;  // tolerance - relative_error
  CompareStatus status = CompareStatus::skipped;
  std::string notice;
};

std::vector<Comparison> compare_theory(const std::map<std::string, double>& simulated,
                                       const std::map<std::string, double>& predictions, double tolerance);
/// Pairs each steady-state estimate of `result` with its theory counterpart.
std::vector<Comparison> compare_theory(const ExperimentResult& result, double tolerance);

}  // namespace netmtl
