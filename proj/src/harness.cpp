#include "netmtl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "netmtl/error.hpp"

namespace netmtl {

// ---------------------------------------------------------------------------
// Steady state

SteadyState steady_state_window(const Eigen::MatrixXd& runs, Index window) {
  const Index r = runs.rows();
  const Index t = runs.cols();
  if (r < 1 || t < 1) throw ConfigError("steady_state: empty trajectory");
  if (window < 1 || window > t) {
    throw ConfigError("steady_state: window of " + std::to_string(window) + " exceeds the trajectory length " +
                      std::to_string(t));
  }
  SteadyState out;
  out.window = window;
  const Index start = t - window;
  Eigen::VectorXd per_run(r);
  for (Index i = 0; i < r; ++i) per_run(i) = runs.row(i).segment(start, window).sum() / static_cast<double>(window);
  out.mean = per_run.sum() / static_cast<double>(r);
  if (r > 1) {
    const double var = (per_run.array() - out.mean).square().sum() / static_cast<double>(r - 1);
    out.std_error = std::sqrt(var / static_cast<double>(r));
  }
  if (window >= 4) {
    const Index half = window / 2;
    double first = 0.0;
    double second = 0.0;
    for (Index j = 0; j < half; ++j) {
      first += runs.col(start + j).sum();
      second += runs.col(t - half + j).sum();
    }
    first /= static_cast<double>(half * r);
    second /= static_cast<double>(half * r);
    // Drift between the window halves that is large both in relative terms
    // and against the across-run spread.
    const double drift = std::abs(second - first);
    const double scale = std::max(std::abs(out.mean), 1e-300);
    out.nonstationary = drift > 0.1 * scale && drift > 3.0 * std::sqrt(2.0) * out.std_error;
  }
  return out;
}

SteadyState steady_state(const Eigen::MatrixXd& runs, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("steady_state: window fraction must lie in (0, 1]");
  const auto window = static_cast<Index>(std::ceil(fraction * static_cast<double>(runs.cols()) - 1e-9));
  return steady_state_window(runs, std::max<Index>(window, 1));
}

SteadyState steady_state(const Eigen::VectorXd& trajectory, double fraction) {
  return steady_state(Eigen::MatrixXd(trajectory.transpose()), fraction);
}

// ---------------------------------------------------------------------------
// Theory

bool theory_applicable(const Scenario& scenario) {
  const StreamModel& m = scenario.model;
  return m.kind() == ModelKind::mse && m.uniform_covariance() && m.truth().has_uniform_blocks();
}

TheoryInputs theory_inputs(const Scenario& scenario, const Strategy& strategy) {
  if (!theory_applicable(scenario)) {
    throw ConfigError("theory applies only to mse models with a shared R_u and block length");
  }
  TheoryInputs in;
  in.mu = strategy.mu();
  in.eta = strategy.eta();
  in.block_size = scenario.model.truth().uniform_block_size();
  in.noise = scenario.model.noise_variances();
  in.ru = scenario.model.covariance(0);
  in.spectrum = scenario.spectrum;
  in.truth = scenario.model.truth();
  if (strategy.kind() == StrategyKind::spectral_reg) {
    const std::vector<double> beta = strategy.config().kernel->coefficients();
    in.kernel = [beta](double x) { return eval_polynomial(beta, x); };
  }
  return in;
}

namespace {

std::optional<Eigen::MatrixXd> orthonormal_columns(const Strategy& strategy, Index agents) {
  const StrategyConfig& cfg = strategy.config();
  Eigen::MatrixXd u;
  switch (cfg.kind) {
    case StrategyKind::diffusion:
      u = Eigen::MatrixXd::Constant(agents, 1, 1.0);
      break;
    case StrategyKind::subspace_projection:
      if (!cfg.subspace->scalar_basis()) return std::nullopt;
      u = *cfg.subspace->scalar_basis();
      break;
    case StrategyKind::clustered: {
      if (cfg.regularizer && strategy.eta() > 0.0) return std::nullopt;
      const ClusterPartition& part = *cfg.partition;
      u = Eigen::MatrixXd::Zero(agents, part.clusters());
      for (Index q = 0; q < part.clusters(); ++q) u.col(q).segment(part.first(q), part.size(q)).setOnes();
      break;
    }
    default:
      return std::nullopt;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(u.rows(), u.cols()));
}

bool smoothness_kind(StrategyKind k) {
  return k == StrategyKind::noncooperative || k == StrategyKind::laplacian_reg || k == StrategyKind::spectral_reg;
}

Json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

TheoryReport predict(const Scenario& scenario, const Strategy& strategy) {
  TheoryReport rep;
  if (!theory_applicable(scenario)) {
    rep.notice = "theory not applicable: requires an mse model with a shared R_u and block length";
    return rep;
  }
  TheoryInputs in = theory_inputs(scenario, strategy);
  rep.noncooperative = msd_noncooperative(in);
  if (smoothness_kind(strategy.kind())) {
    rep.variance = variance_smoothness(in);
    rep.bias = bias_smoothness(in);
    try {
      rep.filter_ratios = filter_bound(in);
    } catch (const ConfigError&) {
      rep.notice = "filter bound skipped: kernel is not monotone on the spectrum";
    }
  }
  if (auto u = orthonormal_columns(strategy, scenario.graph.size())) {
    in.subspace_columns = std::move(u);
    rep.msd_projection = msd_projection(in);
  }
  return rep;
}

Json theory_to_json(const TheoryReport& rep) {
  Json out;
  out["msd_nc"] = rep.noncooperative ? Json(rep.noncooperative->network) : Json(nullptr);
  out["msd_nc_agents"] = rep.noncooperative ? vector_json(rep.noncooperative->agents) : Json(nullptr);
  out["variance"] = rep.variance ? Json{{"total", rep.variance->total}, {"modes", vector_json(rep.variance->modes)}}
                                 : Json(nullptr);
  out["bias"] = rep.bias ? Json{{"total", rep.bias->total}, {"modes", vector_json(rep.bias->modes)}} : Json(nullptr);
  out["msd_projection"] = rep.msd_projection ? Json(*rep.msd_projection) : Json(nullptr);
  out["filter_ratios"] = rep.filter_ratios ? vector_json(*rep.filter_ratios) : Json(nullptr);
  if (!rep.notice.empty()) out["notice"] = rep.notice;
  return out;
}

std::optional<TaskField> optimum_for(const Scenario& scenario, const Strategy& strategy) {
  const StreamModel& model = scenario.model;
  if (model.kind() != ModelKind::mse) return std::nullopt;
  const StrategyKind kind = strategy.kind();
  if (kind == StrategyKind::noncooperative) return model.truth();
  if (!theory_applicable(scenario)) return std::nullopt;
  if (kind == StrategyKind::laplacian_reg || kind == StrategyKind::spectral_reg) {
    return bias_smoothness(theory_inputs(scenario, strategy)).optimum;
  }
  // With one R_u everywhere the R-weighted projection onto Range(U_s kron I)
  // is the plain orthogonal projection.
  if (auto q = orthonormal_columns(strategy, scenario.graph.size())) {
    const Eigen::MatrixXd rows = model.truth().as_rows();
    return TaskField::from_rows(*q * (q->transpose() * rows));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

struct RunOutput {
  Eigen::VectorXd wo;
  Eigen::VectorXd wstar;
  Eigen::VectorXd agents;  // window sums per agent
};

double network_error(const TaskField& ref, const TaskField& w) {
  return (ref.stacked() - w.stacked()).squaredNorm() / static_cast<double>(ref.agents());
}

void simulate_run(const ExperimentConfig& config, const Scenario& sc, const Strategy& strategy,
                  const std::optional<TaskField>& optimum, Index run, Index window_start, RunOutput& out) {
  const StreamModel& model = sc.model;
  const Index n = model.agents();
  const Index t_max = config.iters;
  std::vector<Rng> rngs;
  rngs.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    rngs.push_back(Rng::stream(config.seed, StreamTag::data,
                               {static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(k)}));
  }
  TaskField init(model.truth().block_sizes());
  init.stacked().setConstant(config.init);
  StrategyState state(std::move(init));
  SampleBatch batch;
  out.wo.resize(t_max);
  if (optimum) out.wstar.resize(t_max);
  out.agents = Eigen::VectorXd::Zero(n);
  const double e0 = network_error(model.truth(), state.w);
  const double limit = 1e6 * std::max(e0, 1.0);
  for (Index i = 0; i < t_max; ++i) {
    draw_samples(model, rngs, batch);
    step(state, model, batch, strategy);
    const double e = network_error(model.truth(), state.w);
    if (!std::isfinite(e) || e > limit) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "divergence at iteration %lld of run %lld (mu=%g, eta=%g)",
                    static_cast<long long>(i + 1), static_cast<long long>(run), strategy.mu(), strategy.eta());
      throw DivergenceError(buf);
    }
    out.wo(i) = e;
    if (optimum) out.wstar(i) = network_error(*optimum, state.w);
    if (i >= window_start) {
      for (Index k = 0; k < n; ++k) out.agents(k) += (model.truth().block(k) - state.w.block(k)).squaredNorm();
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const Scenario& scenario, const Strategy& strategy) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.seed = config.seed;
  res.config_hash = config_hash(config);
  res.decimate = config.decimate;
  res.effective_config = config.document;
  res.effective_config["strategy"]["eta"] = strategy.eta();
  res.optimum = optimum_for(scenario, strategy);
  if (res.optimum) res.optimum_gap = (scenario.model.truth().stacked() - res.optimum->stacked()).squaredNorm();
  res.theory = predict(scenario, strategy);

  const Index r_count = config.runs;
  const Index t_max = config.iters;
  const auto window = std::max<Index>(
      1, static_cast<Index>(std::ceil(config.window * static_cast<double>(t_max) - 1e-9)));
  const Index window_start = t_max - window;
  std::vector<RunOutput> outputs(static_cast<std::size_t>(r_count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(r_count));

  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index r = next++; r < r_count; r = next++) {
      try {
        simulate_run(config, scenario, strategy, res.optimum, r, window_start, outputs[static_cast<std::size_t>(r)]);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<Index>(config.parallel, r_count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reduce in run order so the result does not depend on scheduling.
  res.runs_wo.resize(r_count, t_max);
  if (res.optimum) res.runs_wstar.resize(r_count, t_max);
  const Index n = scenario.graph.size();
  res.agent_msd = Eigen::VectorXd::Zero(n);
  for (Index r = 0; r < r_count; ++r) {
    const RunOutput& o = outputs[static_cast<std::size_t>(r)];
    res.runs_wo.row(r) = o.wo.transpose();
    if (res.optimum) res.runs_wstar.row(r) = o.wstar.transpose();
    res.agent_msd += o.agents;
  }
  res.agent_msd /= static_cast<double>(r_count * window);
  res.msd_wo.resize(t_max);
  res.stderr_wo.resize(t_max);
  for (Index i = 0; i < t_max; ++i) {
    double sum = 0.0;
    for (Index r = 0; r < r_count; ++r) sum += res.runs_wo(r, i);
    const double mean = sum / static_cast<double>(r_count);
    double ss = 0.0;
    for (Index r = 0; r < r_count; ++r) ss += (res.runs_wo(r, i) - mean) * (res.runs_wo(r, i) - mean);
    res.msd_wo(i) = mean;
    res.stderr_wo(i) = r_count > 1 ? std::sqrt(ss / static_cast<double>(r_count - 1) / static_cast<double>(r_count)) : 0.0;
  }
  res.steady_wo = steady_state_window(res.runs_wo, window);
  if (res.optimum) {
    res.msd_wstar.resize(t_max);
    for (Index i = 0; i < t_max; ++i) {
      double sum = 0.0;
      for (Index r = 0; r < r_count; ++r) sum += res.runs_wstar(r, i);
      res.msd_wstar(i) = sum / static_cast<double>(r_count);
    }
    res.steady_wstar = steady_state_window(res.runs_wstar, window);
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const Scenario scenario = build_scenario(config);
  const Strategy strategy = build_strategy(config, scenario);
  return run_experiment(config, scenario, strategy);
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json steady_json(const SteadyState& s) {
  return {{"mean", s.mean}, {"stderr", s.std_error}, {"window", s.window}, {"nonstationary", s.nonstationary}};
}

}  // namespace

std::string result_csv(const ExperimentResult& res) {
  std::string out = "iter,msd_wo,msd_wstar,stderr\n";
  const Index t_max = res.msd_wo.size();
  for (Index i = 0; i < t_max; ++i) {
    const Index iter = i + 1;
    if (iter % res.decimate != 0 && iter != t_max) continue;
    out += std::to_string(iter);
    out += ',';
    out += fmt(res.msd_wo(i));
    out += ',';
    if (res.msd_wstar.size() > 0) out += fmt(res.msd_wstar(i));
    out += ',';
    out += fmt(res.stderr_wo(i));
    out += '\n';
  }
  return out;
}

Json result_sidecar(const ExperimentResult& res) {
  Json j;
  j["seed"] = res.seed;
  j["config_hash"] = res.config_hash;
  j["wall_seconds"] = res.wall_seconds;
  j["iters"] = res.msd_wo.size();
  j["runs"] = res.runs_wo.rows();
  j["steady_state"] = {{"msd_wo", steady_json(res.steady_wo)},
                       {"msd_wstar", res.steady_wstar ? steady_json(*res.steady_wstar) : Json(nullptr)},
                       {"agents", vector_json(res.agent_msd)}};
  j["optimum_gap"] = res.optimum_gap ? Json(*res.optimum_gap) : Json(nullptr);
  j["theory"] = theory_to_json(res.theory);
  Json cmp = Json::array();
  for (const auto& c : compare_theory(res, 0.15)) {
    if (c.status == CompareStatus::skipped) continue;
    cmp.push_back({{"metric", c.metric}, {"simulated", c.simulated}, {"theory", c.theory},
                   {"relative_error", c.relative_error}});
  }
  j["comparison"] = cmp;
  if (res.steady_wo.nonstationary) j["warnings"].push_back("msd_wo did not settle inside the steady-state window");
  j["effective_config"] = res.effective_config;
  return j;
}

std::vector<std::filesystem::path> write_result(const ExperimentResult& res, const std::filesystem::path& dir,
                                                const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const auto csv = dir / (prefix + ".csv");
  const auto side = dir / (prefix + ".json");
  write_text_file(csv, result_csv(res));
  write_text_file(side, result_sidecar(res).dump(2) + "\n");
  return {csv, side};
}

// ---------------------------------------------------------------------------
// Sweep

SweepResult eta_sweep(const ExperimentConfig& config, const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("eta_sweep: empty grid");
  const Scenario scenario = build_scenario(config);
  if (!theory_applicable(scenario)) throw ConfigError("eta_sweep: requires an mse model with a shared R_u");
  SweepResult out;
  for (double eta : grid) {
    if (!(eta >= 0.0)) throw ConfigError("eta_sweep: eta values must be nonnegative");
    const Strategy strategy = build_strategy(config, scenario, eta);
    const ExperimentResult res = run_experiment(config, scenario, strategy);
    SweepRow row;
    row.eta = eta;
    row.msd_sim = res.steady_wo.mean;
    row.msd_stderr = res.steady_wo.std_error;
    if (res.steady_wstar) row.var_sim = res.steady_wstar->mean;
    if (res.theory.variance) row.var_theory = res.theory.variance->total;
    if (res.theory.bias) row.bias_theory = res.theory.bias->total;
    out.rows.push_back(row);
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].msd_sim < out.rows[out.argmin].msd_sim) out.argmin = i;
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "eta,msd_sim,var_sim,var_theory,bias_theory\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : sweep.rows) {
    out += fmt(r.eta) + ',' + fmt(r.msd_sim) + ',' + opt(r.var_sim) + ',' + opt(r.var_theory) + ',' +
           opt(r.bias_theory) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison

std::vector<Comparison> compare_theory(const std::map<std::string, double>& simulated,
                                       const std::map<std::string, double>& predictions, double tolerance) {
  std::vector<Comparison> out;
  for (const auto& [metric, sim] : simulated) {
    Comparison c;
    c.metric = metric;
    c.simulated = sim;
    c.tolerance = tolerance;
    const auto it = predictions.find(metric);
    if (it == predictions.end()) {
      c.status = CompareStatus::skipped;
      c.notice = "no theory counterpart for '" + metric + "'";
      out.push_back(c);
      continue;
    }
    c.theory = it->second;
    const double diff = std::abs(sim - c.theory);
    c.relative_error = c.theory != 0.0 ? diff / std::abs(c.theory) : diff;
    c.margin = tolerance - c.relative_error;
    c.status = c.relative_error <= tolerance ? CompareStatus::pass : CompareStatus::fail;
    out.push_back(c);
  }
  return out;
}

std::vector<Comparison> compare_theory(const ExperimentResult& res, double tolerance) {
  std::map<std::string, double> sim;
  std::map<std::string, double> theory;
  const std::string kind = res.effective_config["strategy"]["kind"].get<std::string>();
  sim["msd"] = res.steady_wo.mean;
  if (res.theory.msd_projection) {
    theory["msd"] = *res.theory.msd_projection;
  } else if (kind == "noncooperative" && res.theory.noncooperative) {
    theory["msd"] = res.theory.noncooperative->network;
    for (Index k = 0; k < res.agent_msd.size(); ++k) {
      sim["msd_agent_" + std::to_string(k)] = res.agent_msd(k);
      theory["msd_agent_" + std::to_string(k)] = res.theory.noncooperative->agents(k);
    }
  }
  if (res.steady_wstar && res.theory.variance && kind != "noncooperative") {
    sim["variance"] = res.steady_wstar->mean;
    theory["variance"] = res.theory.variance->total;
  }
  if (res.optimum_gap && res.theory.bias && kind != "noncooperative") {
    sim["bias"] = *res.optimum_gap;
    theory["bias"] = res.theory.bias->total;
  }
  return compare_theory(sim, theory, tolerance);
}

}  // namespace netmtl
