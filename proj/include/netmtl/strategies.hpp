#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "netmtl/combination.hpp"
#include "netmtl/data.hpp"
#include "netmtl/graph.hpp"
#include "netmtl/spectrum.hpp"
#include "netmtl/task_field.hpp"

namespace netmtl {

enum class StrategyKind {
  noncooperative,
  diffusion,
  laplacian_reg,
  spectral_reg,
  prox_l1,
  subspace_projection,
  overlapping,
  clustered,
};

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(std::string_view name);

enum class PenaltyKind { l1, quadratic };

/// Symmetric per-edge weights rho_kl >= 0 for the co-regularizer
/// sum_k sum_l rho_kl h_kl(w_k, w_l). Support is restricted to graph edges.
class EdgeRegularizer {
 public:
  EdgeRegularizer(const Graph& graph, Eigen::MatrixXd weights, PenaltyKind kind);
  static EdgeRegularizer uniform(const Graph& graph, double rho, PenaltyKind kind);
  /// rho on every edge joining two different clusters, zero inside clusters.
  static EdgeRegularizer inter_cluster(const Graph& graph, const ClusterPartition& partition, double rho,
                                       PenaltyKind kind);

  PenaltyKind kind() const { return kind_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  /// Agents l with rho_kl > 0, increasing order.
  std::span<const Neighbor> row(Index k) const { return rows_[static_cast<std::size_t>(k)]; }

 private:
  Eigen::MatrixXd weights_;
  PenaltyKind kind_;
  std::vector<std::vector<Neighbor>> rows_;
};

/// One term a^n_kl psi^n_l of the per-variable combination: the source agent,
/// the position of variable n inside that agent's block, and the weight.
struct OverlapLink {
  Index agent;
  Index local;
  double weight;
};

/// Per-variable combination weights for agents estimating overlapping
/// subsets of a global parameter vector. Agent k's block lists its variables
/// in `interests[k]` order.
class OverlapWeights {
 public:
  /// Metropolis rule on each variable's interest subgraph.
  static OverlapWeights metropolis(const Graph& graph, std::vector<std::vector<Index>> interests, Index variables);
  /// Explicit N x N weight matrix per variable; validated against the
  /// interest subgraphs (sparsity, nonnegativity, unit row and column sums).
  static OverlapWeights from_matrices(const Graph& graph, std::vector<std::vector<Index>> interests,
                                      const std::vector<Eigen::MatrixXd>& per_variable);

  Index variables() const { return variables_; }
  const std::vector<std::vector<Index>>& interests() const { return interests_; }
  std::vector<Index> block_sizes() const;
  std::span<const OverlapLink> links(Index k, Index local) const;
  /// Expands a global vector into the agents' stacked local views.
  TaskField localize(const Eigen::VectorXd& global) const;

 private:
  OverlapWeights() = default;
  static void validate(const Graph& graph, const std::vector<std::vector<Index>>& interests, Index variables);

  Index variables_ = 0;
  std::vector<std::vector<Index>> interests_;
  std::vector<std::vector<std::vector<OverlapLink>>> links_;  // [k][local]
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::noncooperative;
  double mu = 0.01;
  double eta = 0.0;
  std::optional<SpectralKernel> kernel;            // spectral_reg
  std::optional<CombinationMatrix> combination;    // diffusion, subspace_projection, clustered (intra)
  std::optional<Subspace> subspace;                // subspace_projection
  std::optional<ClusterPartition> partition;       // clustered
  std::optional<EdgeRegularizer> regularizer;      // prox_l1, clustered (inter)
  std::optional<OverlapWeights> overlap;           // overlapping
};

/// Validated adaptation rule: the self-learning step followed by the
/// social step selected by `config.kind`. Immutable; safe to share between
/// concurrent runs (per-run buffers live in StrategyState).
class Strategy {
 public:
  /// Throws ConfigError on missing/extra payloads, violated stochasticity or
  /// feasibility, or a failed stability precheck.
  Strategy(Graph graph, StrategyConfig config, std::vector<Index> block_sizes);

  StrategyKind kind() const { return config_.kind; }
  double mu() const { return config_.mu; }
  double eta() const { return config_.eta; }
  const Graph& graph() const { return graph_; }
  const StrategyConfig& config() const { return config_; }
  const std::vector<Index>& block_sizes() const { return block_sizes_; }

 private:
  Graph graph_;
  StrategyConfig config_;
  std::vector<Index> block_sizes_;
};

/// Current estimates plus the scratch intermediates of one run.
struct StrategyState {
  explicit StrategyState(TaskField initial);

  TaskField w;
  TaskField psi;
  TaskField scratch;
  TaskField hop;
  TaskField hop_prev;
  long iteration = 0;
};

/// psi_k = w_k - mu * grad Q_k(w_k; x_k) for every agent.
void self_learn(const StreamModel& model, const SampleBatch& samples, const TaskField& w, double mu, TaskField& psi);

void social_noncooperative(const TaskField& psi, TaskField& out);

/// w_k = psi_k - mu_eta sum_l c_kl (psi_k - psi_l).
void social_smooth(const TaskField& psi, const Graph& graph, double mu_eta, TaskField& out);

/// S-hop recursion: hop^0 = beta_S psi, hop^s_k = beta_{S-s} psi_k + sum_l c_kl (hop^{s-1}_k - hop^{s-1}_l),
/// w = psi - mu_eta hop^S. Equals (I - mu_eta r(L) kron I) psi.
void social_spectral(const TaskField& psi, const Graph& graph, const std::vector<double>& beta, double mu_eta,
                     TaskField& out, TaskField& hop, TaskField& hop_prev);
TaskField social_spectral(const TaskField& psi, const Graph& graph, const std::vector<double>& beta, double mu_eta);

/// argmin_x sum_j weights_j |x - points_j| + (x - anchor)^2 / (2 gamma), by
/// enumerating the breakpoints of the piecewise-quadratic objective.
double prox_l1_scalar(double anchor, std::span<const double> points, std::span<const double> weights, double gamma);

/// Coordinate-wise l1 proximal step toward the neighbors' psi.
void social_prox_l1(const TaskField& psi, const EdgeRegularizer& regularizer, double mu_eta, TaskField& out);

/// w_k = sum_l a_kl psi_l for a scalar combination matrix.
void social_diffusion(const TaskField& psi, const CombinationMatrix& a, TaskField& out);
/// w_k = sum_l A_kl psi_l with blocks A_kl (scalar matrices act as a_kl I).
void social_subspace(const TaskField& psi, const CombinationMatrix& a, TaskField& out);
/// w^n_k = sum_{l in N^n_k} a^n_kl psi^n_l for every variable n of agent k.
void social_overlapping(const TaskField& psi, const OverlapWeights& weights, TaskField& out);
/// Intra-cluster combination phi = A psi, then the inter-cluster step (l1
/// prox or quadratic smoothing over inter-cluster edges). A missing
/// regularizer leaves phi unchanged.
void social_clustered(const TaskField& psi, const CombinationMatrix& intra, const EdgeRegularizer* regularizer,
                      double mu_eta, TaskField& out, TaskField& phi);

/// The social step configured in `strategy`.
void social(const Strategy& strategy, StrategyState& state);

/// self_learn then the configured social step; increments the iteration.
void step(StrategyState& state, const StreamModel& model, const SampleBatch& samples, const Strategy& strategy);

}  // namespace netmtl
