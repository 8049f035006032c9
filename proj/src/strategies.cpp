#include "netmtl/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "netmtl/error.hpp"

namespace netmtl {

namespace {

constexpr std::pair<StrategyKind, std::string_view> kKindNames[] = {
    {StrategyKind::noncooperative, "noncooperative"},
    {StrategyKind::diffusion, "diffusion"},
    {StrategyKind::laplacian_reg, "laplacian_reg"},
    {StrategyKind::spectral_reg, "spectral_reg"},
    {StrategyKind::prox_l1, "prox_l1"},
    {StrategyKind::subspace_projection, "subspace_projection"},
    {StrategyKind::overlapping, "overlapping"},
    {StrategyKind::clustered, "clustered"},
};

std::vector<Neighbor> positive_row(const Eigen::MatrixXd& w, Index k) {
  std::vector<Neighbor> row;
  for (Index l = 0; l < w.cols(); ++l) {
    if (w(k, l) > 0.0) row.push_back({l, w(k, l)});
  }
  return row;
}

void require_shape(const TaskField& a, const TaskField& b, const char* what) {
  if (!a.same_shape(b)) throw ConfigError(std::string(what) + ": block shapes differ");
}

void ensure_shape(const TaskField& like, TaskField& out) {
  if (!out.same_shape(like)) out = TaskField(like.block_sizes());
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown strategy kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// EdgeRegularizer

EdgeRegularizer::EdgeRegularizer(const Graph& graph, Eigen::MatrixXd weights, PenaltyKind kind)
    : weights_(std::move(weights)), kind_(kind) {
  const Index n = graph.size();
  if (weights_.rows() != n || weights_.cols() != n) throw ConfigError("edge regularizer: dimension mismatch");
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      const double r = weights_(k, l);
      if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("edge regularizer: weights must be nonnegative");
      if (r != weights_(l, k)) throw ConfigError("edge regularizer: weights must satisfy rho_kl = rho_lk");
      if (r > 0.0 && (k == l || !graph.adjacent(k, l))) {
        throw ConfigError("edge regularizer: weight on (" + std::to_string(k) + ", " + std::to_string(l) +
                          ") which is not a graph edge");
      }
    }
  }
  for (Index k = 0; k < n; ++k) rows_.push_back(positive_row(weights_, k));
}

EdgeRegularizer EdgeRegularizer::uniform(const Graph& graph, double rho, PenaltyKind kind) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(graph.size(), graph.size());
  for (Index k = 0; k < graph.size(); ++k) {
    for (const auto& nb : graph.neighbors(k)) w(k, nb.agent) = rho;
  }
  return EdgeRegularizer(graph, std::move(w), kind);
}

EdgeRegularizer EdgeRegularizer::inter_cluster(const Graph& graph, const ClusterPartition& partition, double rho,
                                               PenaltyKind kind) {
  if (partition.agents() != graph.size()) throw ConfigError("edge regularizer: partition size mismatch");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(graph.size(), graph.size());
  for (Index k = 0; k < graph.size(); ++k) {
    for (const auto& nb : graph.neighbors(k)) {
      if (!partition.same_cluster(k, nb.agent)) w(k, nb.agent) = rho;
    }
  }
  return EdgeRegularizer(graph, std::move(w), kind);
}

// ---------------------------------------------------------------------------
// OverlapWeights

void OverlapWeights::validate(const Graph& graph, const std::vector<std::vector<Index>>& interests, Index variables) {
  if (static_cast<Index>(interests.size()) != graph.size()) {
    throw ConfigError("overlapping: one interest list per agent required");
  }
  if (variables < 1) throw ConfigError("overlapping: number of global variables must be positive");
  for (std::size_t k = 0; k < interests.size(); ++k) {
    const auto& list = interests[k];
    if (list.empty()) throw ConfigError("overlapping: agent " + std::to_string(k) + " has no variables");
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (list[j] < 0 || list[j] >= variables) throw ConfigError("overlapping: variable index out of range");
      if (j > 0 && list[j] <= list[j - 1]) {
        throw ConfigError("overlapping: interest lists must be strictly increasing");
      }
    }
  }
  for (Index n = 0; n < variables; ++n) {
    std::vector<Index> members;
    for (std::size_t k = 0; k < interests.size(); ++k) {
      if (std::binary_search(interests[k].begin(), interests[k].end(), n)) members.push_back(static_cast<Index>(k));
    }
    if (!induced_connected(graph, members)) {
      throw ConfigError("overlapping: agents interested in variable " + std::to_string(n) +
                        " do not form a connected subgraph");
    }
  }
}

namespace {

Index local_position(const std::vector<Index>& list, Index n) {
  const auto it = std::lower_bound(list.begin(), list.end(), n);
  if (it == list.end() || *it != n) return -1;
  return static_cast<Index>(it - list.begin());
}

}  // namespace

OverlapWeights OverlapWeights::metropolis(const Graph& graph, std::vector<std::vector<Index>> interests,
                                          Index variables) {
  validate(graph, interests, variables);
  const Index n_agents = graph.size();
  std::vector<Eigen::MatrixXd> mats;
  for (Index n = 0; n < variables; ++n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_agents, n_agents);
    std::vector<Index> deg(static_cast<std::size_t>(n_agents), 0);
    auto interested = [&](Index k) { return local_position(interests[static_cast<std::size_t>(k)], n) >= 0; };
    for (Index k = 0; k < n_agents; ++k) {
      if (!interested(k)) continue;
      for (const auto& nb : graph.neighbors(k)) {
        if (interested(nb.agent)) ++deg[static_cast<std::size_t>(k)];
      }
    }
    for (Index k = 0; k < n_agents; ++k) {
      if (!interested(k)) continue;
      double off = 0.0;
      for (const auto& nb : graph.neighbors(k)) {
        if (!interested(nb.agent)) continue;
        const double w =
            1.0 / static_cast<double>(std::max(deg[static_cast<std::size_t>(k)], deg[static_cast<std::size_t>(nb.agent)]) + 1);
        a(k, nb.agent) = w;
        off += w;
      }
      a(k, k) = 1.0 - off;
    }
    mats.push_back(std::move(a));
  }
  return from_matrices(graph, std::move(interests), mats);
}

OverlapWeights OverlapWeights::from_matrices(const Graph& graph, std::vector<std::vector<Index>> interests,
                                             const std::vector<Eigen::MatrixXd>& per_variable) {
  const Index variables = static_cast<Index>(per_variable.size());
  validate(graph, interests, variables);
  const Index n_agents = graph.size();
  OverlapWeights out;
  out.variables_ = variables;
  out.links_.resize(static_cast<std::size_t>(n_agents));
  for (Index k = 0; k < n_agents; ++k) {
    out.links_[static_cast<std::size_t>(k)].resize(interests[static_cast<std::size_t>(k)].size());
  }
  for (Index n = 0; n < variables; ++n) {
    const Eigen::MatrixXd& a = per_variable[static_cast<std::size_t>(n)];
    if (a.rows() != n_agents || a.cols() != n_agents) throw ConfigError("overlapping: weight matrix dimension mismatch");
    const std::string tag = "overlapping: variable " + std::to_string(n) + ": ";
    for (Index k = 0; k < n_agents; ++k) {
      const Index jk = local_position(interests[static_cast<std::size_t>(k)], n);
      double row = 0.0;
      double col = 0.0;
      for (Index l = 0; l < n_agents; ++l) {
        const double w = a(k, l);
        if (w == 0.0) continue;
        const Index jl = local_position(interests[static_cast<std::size_t>(l)], n);
        if (w < 0.0) throw ConfigError(tag + "negative weight");
        if (jk < 0 || jl < 0 || (l != k && !graph.adjacent(k, l))) {
          throw ConfigError(tag + "weight outside the interest neighborhood");
        }
        row += w;
        out.links_[static_cast<std::size_t>(k)][static_cast<std::size_t>(jk)].push_back({l, jl, w});
      }
      for (Index l = 0; l < n_agents; ++l) col += a(l, k);
      if (jk >= 0 && (std::abs(row - 1.0) > 1e-10 || std::abs(col - 1.0) > 1e-10)) {
        throw ConfigError(tag + "weights must sum to one over rows and columns");
      }
    }
  }
  out.interests_ = std::move(interests);
  return out;
}

std::vector<Index> OverlapWeights::block_sizes() const {
  std::vector<Index> sizes;
  for (const auto& list : interests_) sizes.push_back(static_cast<Index>(list.size()));
  return sizes;
}

std::span<const OverlapLink> OverlapWeights::links(Index k, Index local) const {
  return links_[static_cast<std::size_t>(k)][static_cast<std::size_t>(local)];
}

TaskField OverlapWeights::localize(const Eigen::VectorXd& global) const {
  if (global.size() != variables_) throw ConfigError("overlapping: global vector length mismatch");
  TaskField f(block_sizes());
  for (std::size_t k = 0; k < interests_.size(); ++k) {
    for (std::size_t j = 0; j < interests_[k].size(); ++j) {
      f.block(static_cast<Index>(k))(static_cast<Index>(j)) = global(interests_[k][j]);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Strategy construction

namespace {

double spectral_radius_sym(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed in stability precheck");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

void require(bool present, StrategyKind kind, const char* what) {
  if (!present) throw ConfigError(std::string(to_string(kind)) + ": payload '" + what + "' is required");
}

void forbid(bool present, StrategyKind kind, const char* what) {
  if (present) throw ConfigError(std::string(to_string(kind)) + ": payload '" + what + "' is not used by this kind");
}

}  // namespace

Strategy::Strategy(Graph graph, StrategyConfig config, std::vector<Index> block_sizes)
    : graph_(std::move(graph)), config_(std::move(config)), block_sizes_(std::move(block_sizes)) {
  const StrategyKind kind = config_.kind;
  const std::string name(to_string(kind));
  if (!(config_.mu > 0.0) || !std::isfinite(config_.mu)) throw ConfigError(name + ": step size mu must be positive");
  if (!(config_.eta >= 0.0) || !std::isfinite(config_.eta)) throw ConfigError(name + ": eta must be nonnegative");
  if (static_cast<Index>(block_sizes_.size()) != graph_.size()) {
    throw ConfigError(name + ": block sizes do not match the number of agents");
  }
  const bool uniform = std::all_of(block_sizes_.begin(), block_sizes_.end(),
                                   [&](Index s) { return s == block_sizes_.front(); });
  const double mu_eta = config_.mu * config_.eta;

  const bool uses_kernel = kind == StrategyKind::spectral_reg;
  const bool uses_a = kind == StrategyKind::diffusion || kind == StrategyKind::subspace_projection ||
                      kind == StrategyKind::clustered;
  const bool uses_u = kind == StrategyKind::subspace_projection;
  const bool uses_partition = kind == StrategyKind::clustered;
  const bool uses_reg = kind == StrategyKind::prox_l1 || kind == StrategyKind::clustered;
  const bool uses_overlap = kind == StrategyKind::overlapping;
  if (!uses_kernel) forbid(config_.kernel.has_value(), kind, "kernel");
  if (!uses_a) forbid(config_.combination.has_value(), kind, "combination");
  if (!uses_u) forbid(config_.subspace.has_value(), kind, "subspace");
  if (!uses_partition) forbid(config_.partition.has_value(), kind, "partition");
  if (!uses_reg) forbid(config_.regularizer.has_value(), kind, "regularizer");
  if (!uses_overlap) forbid(config_.overlap.has_value(), kind, "overlap");

  switch (kind) {
    case StrategyKind::noncooperative:
      break;
    case StrategyKind::diffusion: {
      require(config_.combination.has_value(), kind, "combination");
      if (!config_.combination->is_scalar()) throw ConfigError(name + ": combination matrix must be scalar");
      const std::string bad = doubly_stochastic_violation(config_.combination->scalar_weights(), graph_);
      if (!bad.empty()) throw ConfigError(name + ": combination matrix is not doubly stochastic: " + bad);
      if (!uniform) throw ConfigError(name + ": agents must share one block length");
      break;
    }
    case StrategyKind::laplacian_reg:
    case StrategyKind::spectral_reg: {
      if (!uniform) throw ConfigError(name + ": agents must share one block length");
      const Spectrum spectrum(graph_);
      double r_max = spectrum.max_eigenvalue();
      if (kind == StrategyKind::spectral_reg) {
        require(config_.kernel.has_value(), kind, "kernel");
        if (config_.kernel->coefficients().empty()) throw ConfigError(name + ": kernel degree must be >= 0");
        r_max = 0.0;
        for (Index m = 0; m < spectrum.size(); ++m) {
          r_max = std::max(r_max, std::abs(eval_polynomial(config_.kernel->coefficients(), spectrum.eigenvalue(m))));
        }
      }
      if (mu_eta * r_max > 2.0 * (1.0 + 1e-12)) {
        throw ConfigError(name + ": stability precheck failed: mu*eta = " + std::to_string(mu_eta) +
                          " exceeds 2/r(lambda_N) = " + std::to_string(2.0 / r_max) + " (rho(I - mu eta r(L)) > 1)");
      }
      break;
    }
    case StrategyKind::prox_l1:
      require(config_.regularizer.has_value(), kind, "regularizer");
      if (config_.regularizer->kind() != PenaltyKind::l1) throw ConfigError(name + ": regularizer must be l1");
      if (config_.regularizer->weights().rows() != graph_.size()) throw ConfigError(name + ": regularizer size mismatch");
      break;
    case StrategyKind::subspace_projection: {
      require(config_.combination.has_value(), kind, "combination");
      require(config_.subspace.has_value(), kind, "subspace");
      if (config_.subspace->block_sizes() != block_sizes_) {
        throw ConfigError(name + ": subspace block sizes do not match the agents");
      }
      const FeasibilityReport rep = check_feasibility(*config_.combination, *config_.subspace, graph_);
      if (!rep.passed()) {
        throw ConfigError(name + ": combination matrix is infeasible for the subspace: violates " + rep.violations());
      }
      break;
    }
    case StrategyKind::overlapping:
      require(config_.overlap.has_value(), kind, "overlap");
      if (config_.overlap->block_sizes() != block_sizes_) {
        throw ConfigError(name + ": agent block lengths must equal their interest list sizes");
      }
      break;
    case StrategyKind::clustered: {
      require(config_.partition.has_value(), kind, "partition");
      require(config_.combination.has_value(), kind, "combination");
      const ClusterPartition& part = *config_.partition;
      if (part.agents() != graph_.size()) throw ConfigError(name + ": partition size mismatch");
      if (!uniform) throw ConfigError(name + ": agents must share one block length");
      if (!config_.combination->is_scalar()) throw ConfigError(name + ": intra-cluster matrix must be scalar");
      const Eigen::MatrixXd& a = config_.combination->scalar_weights();
      const std::string bad = doubly_stochastic_violation(a, graph_);
      if (!bad.empty()) throw ConfigError(name + ": intra-cluster matrix is not doubly stochastic: " + bad);
      for (Index k = 0; k < graph_.size(); ++k) {
        for (Index l = 0; l < graph_.size(); ++l) {
          if (a(k, l) != 0.0 && !part.same_cluster(k, l)) {
            throw ConfigError(name + ": intra-cluster matrix couples agents " + std::to_string(k) + " and " +
                              std::to_string(l) + " of different clusters");
          }
        }
      }
      if (config_.regularizer) {
        const Eigen::MatrixXd& rho = config_.regularizer->weights();
        for (Index k = 0; k < graph_.size(); ++k) {
          for (Index l = 0; l < graph_.size(); ++l) {
            if (rho(k, l) > 0.0 && part.same_cluster(k, l)) {
              throw ConfigError(name + ": regularizer has support on intra-cluster edge (" + std::to_string(k) +
                                ", " + std::to_string(l) + ")");
            }
          }
        }
        if (config_.regularizer->kind() == PenaltyKind::quadratic) {
          Eigen::MatrixXd lap = -rho;
          lap.diagonal() = rho.rowwise().sum();
          const double lmax = spectral_radius_sym(lap);
          if (mu_eta * lmax > 2.0 * (1.0 + 1e-12)) {
            throw ConfigError(name + ": stability precheck failed for the inter-cluster smoothing step");
          }
        }
      }
      break;
    }
  }
}

StrategyState::StrategyState(TaskField initial)
    : w(std::move(initial)), psi(w.block_sizes()), scratch(w.block_sizes()), hop(w.block_sizes()),
      hop_prev(w.block_sizes()) {}

// ---------------------------------------------------------------------------
// Steps

void self_learn(const StreamModel& model, const SampleBatch& samples, const TaskField& w, double mu, TaskField& psi) {
  require_shape(w, model.truth(), "self_learn");
  require_shape(w, samples.regressors, "self_learn");
  ensure_shape(w, psi);
  for (Index k = 0; k < w.agents(); ++k) {
    auto p = psi.block(k);
    instantaneous_gradient(model, w.block(k), samples.regressors.block(k), samples.targets(k), p);
    p = w.block(k) - mu * p;
  }
}

void social_noncooperative(const TaskField& psi, TaskField& out) { out = psi; }

void social_smooth(const TaskField& psi, const Graph& graph, double mu_eta, TaskField& out) {
  ensure_shape(psi, out);
  for (Index k = 0; k < psi.agents(); ++k) {
    auto acc = out.block(k);
    acc.setZero();
    for (const auto& nb : graph.neighbors(k)) acc += nb.weight * (psi.block(k) - psi.block(nb.agent));
    acc = psi.block(k) - mu_eta * acc;
  }
}

void social_spectral(const TaskField& psi, const Graph& graph, const std::vector<double>& beta, double mu_eta,
                     TaskField& out, TaskField& hop, TaskField& hop_prev) {
  if (beta.empty()) throw ConfigError("social_spectral: polynomial degree must be >= 0");
  ensure_shape(psi, out);
  ensure_shape(psi, hop);
  ensure_shape(psi, hop_prev);
  const std::size_t s_max = beta.size() - 1;
  hop.stacked() = beta[s_max] * psi.stacked();
  for (std::size_t s = 1; s <= s_max; ++s) {
    std::swap(hop, hop_prev);
    const double b = beta[s_max - s];
    for (Index k = 0; k < psi.agents(); ++k) {
      auto h = hop.block(k);
      h = b * psi.block(k);
      for (const auto& nb : graph.neighbors(k)) h += nb.weight * (hop_prev.block(k) - hop_prev.block(nb.agent));
    }
  }
  out.stacked() = psi.stacked() - mu_eta * hop.stacked();
}

TaskField social_spectral(const TaskField& psi, const Graph& graph, const std::vector<double>& beta, double mu_eta) {
  TaskField out;
  TaskField a;
  TaskField b;
  social_spectral(psi, graph, beta, mu_eta, out, a, b);
  return out;
}

double prox_l1_scalar(double anchor, std::span<const double> points, std::span<const double> weights, double gamma) {
  if (points.size() != weights.size()) throw ConfigError("prox_l1_scalar: points and weights differ in length");
  if (!(gamma > 0.0)) return anchor;
  std::vector<std::pair<double, double>> bp;
  bp.reserve(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (weights[j] > 0.0) bp.emplace_back(points[j], weights[j]);
  }
  if (bp.empty()) return anchor;
  std::sort(bp.begin(), bp.end());
  // Merge coincident breakpoints.
  std::size_t m = 0;
  for (std::size_t j = 1; j < bp.size(); ++j) {
    if (bp[j].first == bp[m].first) {
      bp[m].second += bp[j].second;
    } else {
      bp[++m] = bp[j];
    }
  }
  bp.resize(m + 1);
  double total = 0.0;
  for (const auto& p : bp) total += p.second;

  // On the open interval left of breakpoint i the l1 slope is 2*left - total.
  const double inf = std::numeric_limits<double>::infinity();
  double left = 0.0;
  for (std::size_t i = 0; i <= bp.size(); ++i) {
    const double lo = i == 0 ? -inf : bp[i - 1].first;
    const double hi = i == bp.size() ? inf : bp[i].first;
    const double x = anchor - gamma * (2.0 * left - total);
    if (x > lo && x < hi) return x;
    if (i < bp.size()) left += bp[i].second;
  }
  // Otherwise the minimizer sits on a breakpoint whose subdifferential holds 0.
  left = 0.0;
  double best = bp.front().first;
  double best_violation = inf;
  for (const auto& [p, w] : bp) {
    const double base = (p - anchor) / gamma;
    const double lower = base + 2.0 * left - total;
    const double upper = lower + 2.0 * w;
    const double violation = std::max({0.0, lower, -upper});
    if (violation < best_violation) {
      best_violation = violation;
      best = p;
    }
    left += w;
  }
  return best;
}

void social_prox_l1(const TaskField& psi, const EdgeRegularizer& regularizer, double mu_eta, TaskField& out) {
  ensure_shape(psi, out);
  if (!(mu_eta > 0.0)) {
    out = psi;
    return;
  }
  std::vector<double> points;
  std::vector<double> weights;
  for (Index k = 0; k < psi.agents(); ++k) {
    const auto row = regularizer.row(k);
    for (Index j = 0; j < psi.block_size(k); ++j) {
      points.clear();
      weights.clear();
      for (const auto& nb : row) {
        points.push_back(psi.block(nb.agent)(j));
        weights.push_back(nb.weight);
      }
      out.block(k)(j) = prox_l1_scalar(psi.block(k)(j), points, weights, mu_eta);
    }
  }
}

void social_diffusion(const TaskField& psi, const CombinationMatrix& a, TaskField& out) {
  if (!a.is_scalar()) throw ConfigError("social_diffusion: combination matrix must be scalar");
  if (a.agents() != psi.agents()) throw ConfigError("social_diffusion: agent count mismatch");
  ensure_shape(psi, out);
  for (Index k = 0; k < psi.agents(); ++k) {
    auto acc = out.block(k);
    acc.setZero();
    for (const auto& e : a.row(k)) acc += e.scalar * psi.block(e.agent);
  }
}

void social_subspace(const TaskField& psi, const CombinationMatrix& a, TaskField& out) {
  if (a.is_scalar()) {
    social_diffusion(psi, a, out);
    return;
  }
  if (a.agents() != psi.agents()) throw ConfigError("social_subspace: agent count mismatch");
  ensure_shape(psi, out);
  for (Index k = 0; k < psi.agents(); ++k) {
    auto acc = out.block(k);
    acc.setZero();
    for (const auto& e : a.row(k)) acc.noalias() += e.block * psi.block(e.agent);
  }
}

void social_overlapping(const TaskField& psi, const OverlapWeights& weights, TaskField& out) {
  ensure_shape(psi, out);
  for (Index k = 0; k < psi.agents(); ++k) {
    for (Index j = 0; j < psi.block_size(k); ++j) {
      double acc = 0.0;
      for (const auto& link : weights.links(k, j)) acc += link.weight * psi.block(link.agent)(link.local);
      out.block(k)(j) = acc;
    }
  }
}

void social_clustered(const TaskField& psi, const CombinationMatrix& intra, const EdgeRegularizer* regularizer,
                      double mu_eta, TaskField& out, TaskField& phi) {
  social_diffusion(psi, intra, phi);
  if (regularizer == nullptr || !(mu_eta > 0.0)) {
    out = phi;
    return;
  }
  if (regularizer->kind() == PenaltyKind::l1) {
    social_prox_l1(phi, *regularizer, mu_eta, out);
    return;
  }
  ensure_shape(phi, out);
  for (Index k = 0; k < phi.agents(); ++k) {
    auto acc = out.block(k);
    acc.setZero();
    for (const auto& nb : regularizer->row(k)) acc += nb.weight * (phi.block(k) - phi.block(nb.agent));
    acc = phi.block(k) - mu_eta * acc;
  }
}

void social(const Strategy& strategy, StrategyState& state) {
  const StrategyConfig& cfg = strategy.config();
  const double mu_eta = cfg.mu * cfg.eta;
  switch (cfg.kind) {
    case StrategyKind::noncooperative:
      social_noncooperative(state.psi, state.w);
      break;
    case StrategyKind::diffusion:
      social_diffusion(state.psi, *cfg.combination, state.w);
      break;
    case StrategyKind::laplacian_reg:
      social_smooth(state.psi, strategy.graph(), mu_eta, state.w);
      break;
    case StrategyKind::spectral_reg:
      social_spectral(state.psi, strategy.graph(), cfg.kernel->coefficients(), mu_eta, state.w, state.hop,
                      state.hop_prev);
      break;
    case StrategyKind::prox_l1:
      social_prox_l1(state.psi, *cfg.regularizer, mu_eta, state.w);
      break;
    case StrategyKind::subspace_projection:
      social_subspace(state.psi, *cfg.combination, state.w);
      break;
    case StrategyKind::overlapping:
      social_overlapping(state.psi, *cfg.overlap, state.w);
      break;
    case StrategyKind::clustered:
      social_clustered(state.psi, *cfg.combination, cfg.regularizer ? &*cfg.regularizer : nullptr, mu_eta, state.w,
                       state.scratch);
      break;
  }
}

void step(StrategyState& state, const StreamModel& model, const SampleBatch& samples, const Strategy& strategy) {
  if (state.w.block_sizes() != strategy.block_sizes()) throw ConfigError("step: state shape does not match strategy");
  self_learn(model, samples, state.w, strategy.mu(), state.psi);
  social(strategy, state);
  ++state.iteration;
}

}  // namespace netmtl
