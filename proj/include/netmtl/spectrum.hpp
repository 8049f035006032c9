#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "netmtl/graph.hpp"
#include "netmtl/task_field.hpp"

namespace netmtl {

/// Laplacian L = diag{C 1} - C of a graph with its full symmetric
/// eigendecomposition L = V diag(lambda) V^T, eigenvalues ascending.
///
/// Eigenvector signs are fixed so that the largest-magnitude entry of each
/// column is positive (first such entry on ties). Nothing downstream depends
/// on the sign; it only makes results reproducible.
class Spectrum {
 public:
  explicit Spectrum(const Graph& graph);

  Index size() const { return laplacian_.rows(); }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  double eigenvalue(Index m) const { return eigenvalues_(m); }
  double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

 private:
  Eigen::MatrixXd laplacian_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

inline Spectrum build_laplacian(const Graph& graph) { return Spectrum(graph); }

/// W^T (L kron I_M) W.
double smoothness(const TaskField& field, const Spectrum& spectrum);
/// (1/2) sum_k sum_{l in N_k} c_kl ||w_k - w_l||^2.
double smoothness_edge_sum(const TaskField& field, const Graph& graph);
/// sum_m lambda_m ||wbar_m||^2 over the graph Fourier coefficients.
double smoothness_spectral(const TaskField& field, const Spectrum& spectrum);

/// Graph Fourier transform (V^T kron I_M) W. Block m of the result is wbar_m.
TaskField graph_fourier(const TaskField& field, const Spectrum& spectrum);
TaskField inverse_graph_fourier(const TaskField& coefficients, const Spectrum& spectrum);

/// Monomial-basis polynomial r(x) = sum_s beta_s x^s evaluated by Horner.
double eval_polynomial(const std::vector<double>& beta, double x);

struct ChebyshevFit {
  std::vector<double> coefficients;  // monomial basis, beta_0 .. beta_S
  double max_error = 0.0;            // dense-grid sup error on the interval
};

/// Truncated shifted-Chebyshev expansion of r on [0, upper], converted to
/// monomial coefficients in lambda.
ChebyshevFit chebyshev_fit(const std::function<double(double)>& r, int degree, double upper);

/// Nonnegative spectral function r(lambda) defining the regularizer
/// W^T (r(L) kron I) W. Either an explicit polynomial, or an arbitrary
/// function paired with a Chebyshev surrogate of degree S used by the
/// distributed S-hop recursion.
class SpectralKernel {
 public:
  static SpectralKernel polynomial(std::vector<double> beta, const Spectrum& spectrum);
  static SpectralKernel function(std::function<double(double)> r, int degree, const Spectrum& spectrum);

  double operator()(double lambda) const;
  bool is_polynomial() const { return !function_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  /// Coefficients executed by the distributed recursion (surrogate for
  /// function kernels).
  const std::vector<double>& coefficients() const { return coefficients_; }
  double fit_error() const { return fit_error_; }

 private:
  SpectralKernel() = default;
  std::vector<double> coefficients_;
  std::function<double(double)> function_;
  double fit_error_ = 0.0;
};

/// r(L) = V r(Lambda) V^T. Throws ConfigError if r is negative on sigma(L).
Eigen::MatrixXd apply_spectral_kernel(const SpectralKernel& kernel, const Spectrum& spectrum);
Eigen::MatrixXd apply_spectral_kernel(const std::function<double(double)>& r, const Spectrum& spectrum);

}  // namespace netmtl
