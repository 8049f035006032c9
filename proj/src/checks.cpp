#include "netmtl/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "netmtl/combination.hpp"
#include "netmtl/error.hpp"

namespace netmtl {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult pair_check(const std::string& name, const Strategy& a, const Strategy& b, const StreamModel& model,
                       Index iters, std::uint64_t seed) {
  const PairOutcome o = compare_strategies(a, b, model, iters, seed);
  CheckResult c;
  c.name = name;
  c.passed = o.bit_identical || o.max_abs_diff <= 1e-12;
  c.detail = o.bit_identical ? "bit-identical" : "max |diff| = " + sci(o.max_abs_diff);
  return c;
}

}  // namespace

PairOutcome compare_strategies(const Strategy& a, const Strategy& b, const StreamModel& model, Index iters,
                               std::uint64_t seed) {
  const Index n = model.agents();
  std::vector<Rng> rngs;
  for (Index k = 0; k < n; ++k) rngs.push_back(Rng::stream(seed, StreamTag::check, {static_cast<std::uint64_t>(k)}));
  StrategyState sa(TaskField(model.truth().block_sizes()));
  StrategyState sb(TaskField(model.truth().block_sizes()));
  SampleBatch batch;
  PairOutcome out;
  out.bit_identical = true;
  for (Index i = 0; i < iters; ++i) {
    draw_samples(model, rngs, batch);
    step(sa, model, batch, a);
    step(sb, model, batch, b);
    const Eigen::VectorXd& x = sa.w.stacked();
    const Eigen::VectorXd& y = sb.w.stacked();
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    out.max_abs_diff = std::max(out.max_abs_diff, (x - y).cwiseAbs().maxCoeff() / scale);
    for (Index j = 0; j < x.size(); ++j) {
      if (x(j) != y(j)) out.bit_identical = false;
    }
  }
  return out;
}

std::vector<CheckResult> reduction_lattice(const Graph& graph, const StreamModel& model, double mu, double eta,
                                           Index iters, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto& sizes = model.truth().block_sizes();
  if (!model.truth().has_uniform_blocks()) {
    out.push_back({"reduction lattice", false, "requires a shared block length"});
    return out;
  }
  if (!graph.connected()) {
    out.push_back({"reduction lattice", false, "requires a connected graph"});
    return out;
  }
  const Index n = graph.size();
  const Index m = model.truth().uniform_block_size();
  const Spectrum spectrum(graph);
  double eta_used = eta > 0.0 ? eta : 1.0;
  if (mu * eta_used * spectrum.max_eigenvalue() > 2.0) eta_used = 1.0 / (mu * spectrum.max_eigenvalue());

  auto make = [&](StrategyConfig cfg) { return Strategy(graph, std::move(cfg), sizes); };
  StrategyConfig base;
  base.mu = mu;

  {
    StrategyConfig lap = base;
    lap.kind = StrategyKind::laplacian_reg;
    lap.eta = eta_used;
    StrategyConfig spec = lap;
    spec.kind = StrategyKind::spectral_reg;
    spec.kernel = SpectralKernel::polynomial({0.0, 1.0}, spectrum);
    out.push_back(pair_check("spectral_reg(r=lambda) == laplacian_reg", make(spec), make(lap), model, iters, seed));
  }
  {
    StrategyConfig lap = base;
    lap.kind = StrategyKind::laplacian_reg;
    StrategyConfig nc = base;
    out.push_back(pair_check("laplacian_reg(eta=0) == noncooperative", make(lap), make(nc), model, iters, seed));
  }
  {
    StrategyConfig diff = base;
    diff.kind = StrategyKind::diffusion;
    diff.combination = metropolis_weights(graph);
    StrategyConfig cl = base;
    cl.kind = StrategyKind::clustered;
    cl.partition = ClusterPartition({n});
    cl.combination = cluster_metropolis_weights(graph, *cl.partition);
    out.push_back(pair_check("clustered(Q=1, eta=0) == diffusion", make(cl), make(diff), model, iters, seed));

    StrategyConfig sub = base;
    sub.kind = StrategyKind::subspace_projection;
    sub.combination = metropolis_weights(graph);
    sub.subspace = consensus_subspace(n, m);
    out.push_back(pair_check("subspace_projection(consensus, scalar A) == diffusion", make(sub), make(diff), model,
                             iters, seed));
  }
  {
    StrategyConfig prox = base;
    prox.kind = StrategyKind::prox_l1;
    prox.eta = eta_used;
    prox.regularizer = EdgeRegularizer::uniform(graph, 1.0, PenaltyKind::l1);
    StrategyConfig cl = prox;
    cl.kind = StrategyKind::clustered;
    cl.partition = ClusterPartition(std::vector<Index>(static_cast<std::size_t>(n), 1));
    cl.combination = CombinationMatrix::scalar(Eigen::MatrixXd::Identity(n, n));
    cl.regularizer = EdgeRegularizer::inter_cluster(graph, *cl.partition, 1.0, PenaltyKind::l1);
    out.push_back(pair_check("clustered(Q=N, l1) == prox_l1", make(cl), make(prox), model, iters, seed));
  }
  return out;
}

CheckResult spectral_oracle_check(const Graph& graph, const std::vector<double>& beta, double mu_eta, Index block_size,
                                  std::uint64_t seed, int trials) {
  const Spectrum spectrum(graph);
  const Index n = graph.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (auto it = beta.rbegin(); it != beta.rend(); ++it) {
    r = (spectrum.laplacian() * r).eval();
    r.diagonal().array() += *it;
  }
  const Eigen::MatrixXd op = Eigen::MatrixXd::Identity(n, n) - mu_eta * r;
  Rng rng = Rng::stream(seed, StreamTag::check, {0x5ec7});
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    TaskField psi = TaskField::uniform(n, block_size);
    for (Index i = 0; i < psi.total_size(); ++i) psi.stacked()(i) = rng.normal();
    const TaskField got = social_spectral(psi, graph, beta, mu_eta);
    const Eigen::MatrixXd want = op * psi.as_rows();
    const double rel = (got.as_rows() - want).norm() / std::max(want.norm(), 1e-300);
    worst = std::max(worst, rel);
  }
  return {"spectral recursion == dense oracle", worst <= 1e-10, "max relative error = " + sci(worst)};
}

std::vector<CheckResult> structural_checks(const ExperimentConfig& config) {
  std::vector<CheckResult> out;
  const Scenario sc = build_scenario(config);
  const StrategyKind kind = config.kind();
  out.push_back({"graph connected", sc.graph.connected(), sc.graph.connected() ? "" : "graph is disconnected"});

  std::optional<StrategyConfig> cfg;
  try {
    cfg = build_strategy_config(config, sc);
  } catch (const ConfigError& e) {
    out.push_back({"strategy payload", false, e.what()});
    return out;
  }

  if (kind == StrategyKind::subspace_projection) {
    const FeasibilityReport rep = check_feasibility(*cfg->combination, *cfg->subspace, sc.graph);
    out.push_back({"feasibility: A U = U", rep.right_eigen, "residual " + sci(rep.right_residual)});
    out.push_back({"feasibility: U^T A = U^T", rep.left_eigen, "residual " + sci(rep.left_residual)});
    out.push_back({"feasibility: rho(A - P_U) < 1", rep.contraction, "rho = " + sci(rep.spectral_radius)});
    out.push_back({"feasibility: sparsity", rep.sparsity, ""});
    out.push_back({"feasibility: semi-convergence", rep.semi_convergent,
                   rep.power_gaps.empty() ? "" : "||A^i - P_U|| at i=max: " + sci(rep.power_gaps.back())});
  }
  if ((kind == StrategyKind::diffusion || kind == StrategyKind::clustered) && cfg->combination->is_scalar()) {
    const std::string bad = doubly_stochastic_violation(cfg->combination->scalar_weights(), sc.graph);
    out.push_back({"combination doubly stochastic", bad.empty(), bad});
  }
  try {
    Strategy s(sc.graph, *cfg, sc.model.truth().block_sizes());
    out.push_back({"strategy validation", true, std::string(to_string(kind))});
  } catch (const ConfigError& e) {
    out.push_back({"strategy validation", false, e.what()});
  }
  if (kind == StrategyKind::spectral_reg) {
    out.push_back(spectral_oracle_check(sc.graph, cfg->kernel->coefficients(), cfg->mu * std::max(cfg->eta, 1e-3),
                                        sc.model.truth().uniform_block_size(), config.seed));
    const auto& beta = cfg->kernel->coefficients();
    if (beta.size() == 2 && beta[0] == 0.0 && beta[1] == 1.0) {
      StrategyConfig lap;
      lap.kind = StrategyKind::laplacian_reg;
      lap.mu = cfg->mu;
      lap.eta = cfg->eta;
      try {
        const Strategy a(sc.graph, *cfg, sc.model.truth().block_sizes());
        const Strategy b(sc.graph, lap, sc.model.truth().block_sizes());
        out.push_back(pair_check("configured kernel == laplacian_reg", a, b, sc.model, 50, config.seed));
      } catch (const ConfigError& e) {
        out.push_back({"configured kernel == laplacian_reg", false, e.what()});
      }
    }
  }
  if (sc.model.truth().has_uniform_blocks() && sc.graph.connected()) {
    for (auto& c : reduction_lattice(sc.graph, sc.model, cfg->mu, cfg->eta, 50, config.seed)) out.push_back(c);
  }
  return out;
}

}  // namespace netmtl
