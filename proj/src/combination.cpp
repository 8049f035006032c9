#include "netmtl/combination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netmtl/error.hpp"

namespace netmtl {

namespace {

std::vector<Index> offsets_of(const std::vector<Index>& sizes) {
  std::vector<Index> off(sizes.size() + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), off.begin() + 1);
  return off;
}

}  // namespace

CombinationMatrix CombinationMatrix::scalar(Eigen::MatrixXd weights) {
  if (weights.rows() != weights.cols() || weights.rows() < 1) {
    throw ConfigError("combination matrix: weights must be a nonempty square matrix");
  }
  if (!weights.allFinite()) throw ConfigError("combination matrix: non-finite weight");
  CombinationMatrix a;
  a.scalar_ = true;
  a.matrix_ = std::move(weights);
  const Index n = a.matrix_.rows();
  a.rows_.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      if (a.matrix_(k, l) != 0.0) a.rows_[static_cast<std::size_t>(k)].push_back({l, a.matrix_(k, l), {}});
    }
  }
  return a;
}

CombinationMatrix CombinationMatrix::blocks(Eigen::MatrixXd full, std::vector<Index> block_sizes) {
  const auto off = offsets_of(block_sizes);
  if (full.rows() != off.back() || full.cols() != off.back()) {
    throw ConfigError("combination matrix: block sizes do not match the matrix dimension");
  }
  if (!full.allFinite()) throw ConfigError("combination matrix: non-finite weight");
  CombinationMatrix a;
  a.scalar_ = false;
  a.matrix_ = std::move(full);
  a.block_sizes_ = std::move(block_sizes);
  const Index n = static_cast<Index>(a.block_sizes_.size());
  a.rows_.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      Eigen::MatrixXd blk = a.matrix_.block(off[static_cast<std::size_t>(k)], off[static_cast<std::size_t>(l)],
                                            a.block_sizes_[static_cast<std::size_t>(k)],
                                            a.block_sizes_[static_cast<std::size_t>(l)]);
      if (blk.size() > 0 && blk.cwiseAbs().maxCoeff() != 0.0) {
        a.rows_[static_cast<std::size_t>(k)].push_back({l, 0.0, std::move(blk)});
      }
    }
  }
  return a;
}

const Eigen::MatrixXd& CombinationMatrix::scalar_weights() const {
  if (!scalar_) throw ConfigError("combination matrix: block matrix has no scalar form");
  return matrix_;
}

Eigen::MatrixXd CombinationMatrix::expanded(const std::vector<Index>& block_sizes) const {
  if (!scalar_) {
    if (block_sizes != block_sizes_) throw ConfigError("combination matrix: block sizes mismatch");
    return matrix_;
  }
  if (static_cast<Index>(block_sizes.size()) != agents()) {
    throw ConfigError("combination matrix: agent count mismatch");
  }
  const auto off = offsets_of(block_sizes);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(off.back(), off.back());
  for (Index k = 0; k < agents(); ++k) {
    for (const auto& e : row(k)) {
      const auto uk = static_cast<std::size_t>(k);
      const auto ul = static_cast<std::size_t>(e.agent);
      if (block_sizes[uk] != block_sizes[ul]) {
        throw ConfigError("combination matrix: scalar weight couples agents with different block lengths");
      }
      full.block(off[uk], off[ul], block_sizes[uk], block_sizes[ul]).diagonal().setConstant(e.scalar);
    }
  }
  return full;
}

CombinationMatrix metropolis_weights(const Graph& graph) {
  if (!graph.connected()) throw ConfigError("metropolis weights: graph is not connected");
  const Index n = graph.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    double off_diag = 0.0;
    for (const auto& nb : graph.neighbors(k)) {
      const double w = 1.0 / static_cast<double>(std::max(graph.degree(k), graph.degree(nb.agent)) + 1);
      a(k, nb.agent) = w;
      off_diag += w;
    }
    a(k, k) = 1.0 - off_diag;
  }
  return CombinationMatrix::scalar(std::move(a));
}

CombinationMatrix laplacian_rule_weights(const Graph& graph) {
  if (!graph.connected()) throw ConfigError("laplacian rule weights: graph is not connected");
  const Index n = graph.size();
  Index n_max = 1;
  for (Index k = 0; k < n; ++k) n_max = std::max(n_max, graph.degree(k) + 1);
  const double gamma = 1.0 / static_cast<double>(n_max);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    for (const auto& nb : graph.neighbors(k)) a(k, nb.agent) = gamma;
    a(k, k) = 1.0 - gamma * static_cast<double>(graph.degree(k));
  }
  return CombinationMatrix::scalar(std::move(a));
}

CombinationMatrix cluster_metropolis_weights(const Graph& graph, const ClusterPartition& partition) {
  const Index n = graph.size();
  if (partition.agents() != n) throw ConfigError("cluster metropolis weights: partition size mismatch");
  for (Index q = 0; q < partition.clusters(); ++q) {
    std::vector<Index> members(static_cast<std::size_t>(partition.size(q)));
    std::iota(members.begin(), members.end(), partition.first(q));
    if (!induced_connected(graph, members)) {
      throw ConfigError("cluster metropolis weights: cluster " + std::to_string(q) + " is not connected");
    }
  }
  std::vector<Index> deg(static_cast<std::size_t>(n), 0);
  for (Index k = 0; k < n; ++k) {
    for (const auto& nb : graph.neighbors(k)) {
      if (partition.same_cluster(k, nb.agent)) ++deg[static_cast<std::size_t>(k)];
    }
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    double off_diag = 0.0;
    for (const auto& nb : graph.neighbors(k)) {
      if (!partition.same_cluster(k, nb.agent)) continue;
      const double w = 1.0 / static_cast<double>(
                                 std::max(deg[static_cast<std::size_t>(k)], deg[static_cast<std::size_t>(nb.agent)]) + 1);
      a(k, nb.agent) = w;
      off_diag += w;
    }
    a(k, k) = 1.0 - off_diag;
  }
  return CombinationMatrix::scalar(std::move(a));
}

std::string doubly_stochastic_violation(const Eigen::MatrixXd& a, const Graph& graph, double tol) {
  const Index n = graph.size();
  if (a.rows() != n || a.cols() != n) return "dimension mismatch with graph";
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      if (a(k, l) < 0.0) return "negative weight a(" + std::to_string(k) + "," + std::to_string(l) + ")";
      if (l != k && a(k, l) != 0.0 && !graph.adjacent(k, l)) {
        return "sparsity: a(" + std::to_string(k) + "," + std::to_string(l) + ") links non-neighbors";
      }
    }
    if (std::abs(a.row(k).sum() - 1.0) > tol) return "row " + std::to_string(k) + " does not sum to one";
    if (std::abs(a.col(k).sum() - 1.0) > tol) return "column " + std::to_string(k) + " does not sum to one";
  }
  return {};
}

Eigen::MatrixXd projector(const Eigen::MatrixXd& basis) {
  if (basis.cols() < 1 || basis.rows() < basis.cols()) {
    throw NumericalError("projector: basis must be tall with at least one column");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0) || s(s.size() - 1) < 1e-10 * s(0)) {
    throw NumericalError("projector: basis is rank deficient");
  }
  const Eigen::MatrixXd& q = svd.matrixU();
  return q * q.transpose();
}

Subspace::Subspace(Eigen::MatrixXd basis, std::vector<Index> block_sizes, bool semi_orthogonal)
    : basis_(std::move(basis)), block_sizes_(std::move(block_sizes)), semi_orthogonal_(semi_orthogonal) {
  if (std::accumulate(block_sizes_.begin(), block_sizes_.end(), Index{0}) != basis_.rows()) {
    throw ConfigError("subspace: block sizes do not sum to the basis row count");
  }
  projector(basis_);  // rank check
  if (semi_orthogonal_) {
    const Eigen::MatrixXd gram = basis_.transpose() * basis_;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    if ((gram - eye).norm() > 1e-10 * std::sqrt(static_cast<double>(gram.rows()))) {
      throw ConfigError("subspace: basis flagged semi-orthogonal but U^T U != I");
    }
  }
}

Subspace Subspace::kronecker(Eigen::MatrixXd scalar_basis, Index block_size) {
  const Index n = scalar_basis.rows();
  const Index p = scalar_basis.cols();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n * block_size, p * block_size);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < p; ++j) {
      full.block(k * block_size, j * block_size, block_size, block_size).diagonal().setConstant(scalar_basis(k, j));
    }
  }
  const Eigen::MatrixXd gram = scalar_basis.transpose() * scalar_basis;
  const bool semi = (gram - Eigen::MatrixXd::Identity(p, p)).norm() <= 1e-10 * std::sqrt(static_cast<double>(p));
  Subspace s(std::move(full), std::vector<Index>(static_cast<std::size_t>(n), block_size), semi);
  s.scalar_basis_ = std::move(scalar_basis);
  return s;
}

Subspace consensus_subspace(Index agents, Index block_size) {
  return cluster_subspace(ClusterPartition({agents}), block_size);
}

Subspace cluster_subspace(const ClusterPartition& partition, Index block_size) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(partition.agents(), partition.clusters());
  for (Index q = 0; q < partition.clusters(); ++q) {
    u.col(q).segment(partition.first(q), partition.size(q)).setConstant(1.0 / std::sqrt(static_cast<double>(partition.size(q))));
  }
  return Subspace::kronecker(std::move(u), block_size);
}

Subspace laplacian_subspace(const Spectrum& spectrum, Index c, Index block_size) {
  if (c < 1 || c > spectrum.size()) throw ConfigError("laplacian subspace: c must lie in [1, N]");
  return Subspace::kronecker(spectrum.eigenvectors().leftCols(c), block_size);
}

std::string FeasibilityReport::violations() const {
  std::string out;
  auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(right_eigen, "A U = U");
  add(left_eigen, "U^T A = U^T");
  add(contraction, "rho(A - P_U) < 1");
  add(sparsity, "sparsity");
  add(semi_convergent, "semi-convergence");
  return out;
}

FeasibilityReport check_feasibility(const CombinationMatrix& a, const Subspace& subspace, const Graph& graph,
                                    int max_power) {
  FeasibilityReport rep;
  const auto& sizes = subspace.block_sizes();
  if (a.agents() != graph.size() || static_cast<Index>(sizes.size()) != graph.size()) {
    throw ConfigError("check_feasibility: dimension mismatch between A, U and the graph");
  }
  const Eigen::MatrixXd full = a.expanded(sizes);
  const Eigen::MatrixXd& u = subspace.basis();
  const Eigen::MatrixXd p = projector(u);
  const double scale = std::max(1.0, u.norm());

  rep.right_residual = (full * u - u).norm();
  rep.left_residual = (u.transpose() * full - u.transpose()).norm();
  rep.right_eigen = rep.right_residual <= 1e-9 * scale;
  rep.left_eigen = rep.left_residual <= 1e-9 * scale;

  const Eigen::MatrixXd gap = full - p;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(gap, false);
  if (eig.info() != Eigen::Success) throw NumericalError("check_feasibility: eigensolver failed on A - P_U");
  rep.spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  rep.contraction = rep.spectral_radius < 1.0 - 1e-8;

  rep.sparsity = true;
  for (Index k = 0; k < graph.size(); ++k) {
    for (const auto& e : a.row(k)) {
      if (e.agent != k && !graph.adjacent(k, e.agent)) rep.sparsity = false;
    }
  }

  Eigen::MatrixXd power = full;
  for (int i = 1; i <= max_power; ++i) {
    if (i > 1) power = (power * full).eval();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(power - p);
    rep.power_gaps.push_back(svd.singularValues()(0));
  }
  if (rep.power_gaps.empty()) {
    rep.semi_convergent = true;
  } else {
    const double first = rep.power_gaps.front();
    const double last = rep.power_gaps.back();
    rep.semi_convergent = last <= 1e-12 || (std::isfinite(last) && last < first);
  }
  return rep;
}

}  // namespace netmtl
