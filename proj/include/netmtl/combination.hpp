#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "netmtl/graph.hpp"
#include "netmtl/spectrum.hpp"

namespace netmtl {

/// One nonzero block of a combination row: agent l and the weight block
/// A_kl (M_k x M_l). For scalar matrices the block is a_kl I and only
/// `scalar` is meaningful.
struct CombinationEntry {
  Index agent;
  double scalar;
  Eigen::MatrixXd block;
};

/// N x N block matrix A with block (k, l) of size M_k x M_l. When every block
/// is a_kl I_M it is stored as the N x N scalar matrix.
class CombinationMatrix {
 public:
  static CombinationMatrix scalar(Eigen::MatrixXd weights);
  static CombinationMatrix blocks(Eigen::MatrixXd full, std::vector<Index> block_sizes);

  bool is_scalar() const { return scalar_; }
  Index agents() const { return static_cast<Index>(rows_.size()); }
  /// N x N weights; only for scalar matrices.
  const Eigen::MatrixXd& scalar_weights() const;
  /// Full M_t x M_t matrix (scalar matrices are expanded as A kron I).
  Eigen::MatrixXd expanded(const std::vector<Index>& block_sizes) const;
  /// Nonzero entries of row k in increasing agent order (includes k when its
  /// self-weight is nonzero).
  const std::vector<CombinationEntry>& row(Index k) const { return rows_[static_cast<std::size_t>(k)]; }

 private:
  CombinationMatrix() = default;
  bool scalar_ = true;
  Eigen::MatrixXd matrix_;
  std::vector<Index> block_sizes_;
  std::vector<std::vector<CombinationEntry>> rows_;
};

/// a_kl = 1 / max(n_k, n_l) for neighbors, n_k = |N_k| + 1; self-weight
/// completes the row. Symmetric and doubly stochastic.
CombinationMatrix metropolis_weights(const Graph& graph);
/// A = I - L_u / n_max with L_u the unweighted Laplacian and n_max the
/// largest neighborhood size (self included).
CombinationMatrix laplacian_rule_weights(const Graph& graph);

/// Metropolis rule applied inside each cluster's induced subgraph; zero
/// across clusters. Each cluster must induce a connected subgraph.
CombinationMatrix cluster_metropolis_weights(const Graph& graph, const ClusterPartition& partition);

/// Doubly-stochastic check on a scalar combination matrix: nonnegative, rows
/// and columns sum to one, sparsity follows the graph. Returns an empty
/// string when valid, otherwise a description of the first violation.
std::string doubly_stochastic_violation(const Eigen::MatrixXd& a, const Graph& graph, double tol = 1e-10);

/// Range(U) for an M_t x P full-column-rank basis with per-agent block
/// lengths. Kronecker-structured subspaces U_s kron I_M remember U_s.
class Subspace {
 public:
  Subspace(Eigen::MatrixXd basis, std::vector<Index> block_sizes, bool semi_orthogonal = false);
  static Subspace kronecker(Eigen::MatrixXd scalar_basis, Index block_size);

  const Eigen::MatrixXd& basis() const { return basis_; }
  Index dimension() const { return basis_.cols(); }
  Index ambient_size() const { return basis_.rows(); }
  const std::vector<Index>& block_sizes() const { return block_sizes_; }
  bool semi_orthogonal() const { return semi_orthogonal_; }
  /// The N x P-bar factor when the basis is U_s kron I_M.
  const std::optional<Eigen::MatrixXd>& scalar_basis() const { return scalar_basis_; }

 private:
  Eigen::MatrixXd basis_;
  std::vector<Index> block_sizes_;
  bool semi_orthogonal_ = false;
  std::optional<Eigen::MatrixXd> scalar_basis_;
};

Subspace consensus_subspace(Index agents, Index block_size);
Subspace cluster_subspace(const ClusterPartition& partition, Index block_size);
/// Span of the first c Laplacian eigenvectors (kron I_M).
Subspace laplacian_subspace(const Spectrum& spectrum, Index c, Index block_size);

/// P_U = U (U^T U)^{-1} U^T. Throws NumericalError for rank-deficient U
/// (singular values below 1e-10 sigma_max).
Eigen::MatrixXd projector(const Eigen::MatrixXd& basis);
inline Eigen::MatrixXd projector(const Subspace& subspace) { return projector(subspace.basis()); }

struct FeasibilityReport {
  bool right_eigen = false;   // A U = U
  bool left_eigen = false;    // U^T A = U^T
  bool contraction = false;   // rho(A - P_U) < 1
  bool sparsity = false;      // blocks vanish off the neighborhoods
  bool semi_convergent = false;
  double right_residual = 0.0;
  double left_residual = 0.0;
  double spectral_radius = 0.0;
  /// ||A^i - P_U||_2 for i = 1 .. max_power.
  std::vector<double> power_gaps;

  bool feasible() const { return right_eigen && left_eigen && contraction && sparsity; }
  bool passed() const { return feasible() && semi_convergent; }
  /// Names of violated constraints, comma separated; empty when passed.
  std::string violations() const;
};

FeasibilityReport check_feasibility(const CombinationMatrix& a, const Subspace& subspace, const Graph& graph,
                                    int max_power = 200);

}  // namespace netmtl
