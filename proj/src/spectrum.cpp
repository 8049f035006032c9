#include "netmtl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "netmtl/error.hpp"

namespace netmtl {

Spectrum::Spectrum(const Graph& graph) {
  const Eigen::MatrixXd& c = graph.adjacency();
  laplacian_ = -c;
  laplacian_.diagonal() = c.rowwise().sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("laplacian eigendecomposition did not converge (N=" +
                         std::to_string(laplacian_.rows()) + ")");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  for (Index m = 0; m < eigenvectors_.cols(); ++m) {
    Index arg = 0;
    double best = -1.0;
    for (Index k = 0; k < eigenvectors_.rows(); ++k) {
      // Relative slack so columns like 1/sqrt(N) resolve to the first entry.
      const double a = std::abs(eigenvectors_(k, m));
      if (a > best * (1.0 + 1e-9)) {
        best = a;
        arg = k;
      }
    }
    if (eigenvectors_(arg, m) < 0.0) eigenvectors_.col(m) *= -1.0;
  }
}

double smoothness(const TaskField& field, const Spectrum& spectrum) {
  const Eigen::MatrixXd rows = field.as_rows();
  if (rows.rows() != spectrum.size()) throw ConfigError("smoothness: agent count mismatch");
  return (rows.transpose() * spectrum.laplacian() * rows).trace();
}

double smoothness_edge_sum(const TaskField& field, const Graph& graph) {
  field.uniform_block_size();
  double total = 0.0;
  for (Index k = 0; k < graph.size(); ++k) {
    for (const auto& nb : graph.neighbors(k)) {
      total += nb.weight * (field.block(k) - field.block(nb.agent)).squaredNorm();
    }
  }
  return 0.5 * total;
}

double smoothness_spectral(const TaskField& field, const Spectrum& spectrum) {
  const TaskField bar = graph_fourier(field, spectrum);
  double total = 0.0;
  for (Index m = 1; m < spectrum.size(); ++m) {
    total += spectrum.eigenvalue(m) * bar.block(m).squaredNorm();
  }
  // lambda_1 is zero only up to rounding; keep its (negligible) contribution.
  total += spectrum.eigenvalue(0) * bar.block(0).squaredNorm();
  return total;
}

TaskField graph_fourier(const TaskField& field, const Spectrum& spectrum) {
  const Eigen::MatrixXd rows = field.as_rows();
  if (rows.rows() != spectrum.size()) throw ConfigError("graph_fourier: agent count mismatch");
  return TaskField::from_rows(spectrum.eigenvectors().transpose() * rows);
}

TaskField inverse_graph_fourier(const TaskField& coefficients, const Spectrum& spectrum) {
  const Eigen::MatrixXd rows = coefficients.as_rows();
  if (rows.rows() != spectrum.size()) throw ConfigError("inverse_graph_fourier: agent count mismatch");
  return TaskField::from_rows(spectrum.eigenvectors() * rows);
}

double eval_polynomial(const std::vector<double>& beta, double x) {
  double acc = 0.0;
  for (auto it = beta.rbegin(); it != beta.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ChebyshevFit chebyshev_fit(const std::function<double(double)>& r, int degree, double upper) {
  if (degree < 0) throw ConfigError("chebyshev_fit: degree must be nonnegative");
  if (!(upper > 0.0)) throw ConfigError("chebyshev_fit: interval upper end must be positive");
  const int s = degree;
  const int nodes = std::max(64, 4 * (s + 1));

  // Chebyshev coefficients on x in [-1, 1], lambda = (x + 1) upper / 2.
  std::vector<double> cheb(static_cast<std::size_t>(s) + 1, 0.0);
  for (int k = 0; k < nodes; ++k) {
    const double theta = std::numbers::pi * (k + 0.5) / nodes;
    const double fx = r((std::cos(theta) + 1.0) * 0.5 * upper);
    for (int j = 0; j <= s; ++j) cheb[static_cast<std::size_t>(j)] += fx * std::cos(j * theta);
  }
  for (auto& c : cheb) c *= 2.0 / nodes;
  cheb[0] *= 0.5;

  // Sum of c_j T_j(x) in the monomial basis of x.
  std::vector<double> in_x(static_cast<std::size_t>(s) + 1, 0.0);
  std::vector<double> t_prev(static_cast<std::size_t>(s) + 1, 0.0);
  std::vector<double> t_curr(static_cast<std::size_t>(s) + 1, 0.0);
  t_prev[0] = 1.0;
  if (s >= 1) t_curr[1] = 1.0;
  for (int j = 0; j <= s; ++j) {
    const std::vector<double>& tj = (j == 0) ? t_prev : t_curr;
    for (int i = 0; i <= s; ++i) in_x[static_cast<std::size_t>(i)] += cheb[static_cast<std::size_t>(j)] * tj[static_cast<std::size_t>(i)];
    if (j >= 1 && j < s) {
      std::vector<double> next(static_cast<std::size_t>(s) + 1, 0.0);
      for (int i = 0; i < s; ++i) next[static_cast<std::size_t>(i) + 1] += 2.0 * t_curr[static_cast<std::size_t>(i)];
      for (int i = 0; i <= s; ++i) next[static_cast<std::size_t>(i)] -= t_prev[static_cast<std::size_t>(i)];
      t_prev = std::move(t_curr);
      t_curr = std::move(next);
    }
  }

  // Substitute x = a lambda + b by Horner composition.
  const double a = 2.0 / upper;
  const double b = -1.0;
  std::vector<double> beta(static_cast<std::size_t>(s) + 1, 0.0);
  for (int i = s; i >= 0; --i) {
    std::vector<double> next(static_cast<std::size_t>(s) + 1, 0.0);
    for (int p = 0; p <= s; ++p) {
      const double v = beta[static_cast<std::size_t>(p)];
      if (v == 0.0) continue;
      next[static_cast<std::size_t>(p)] += b * v;
      if (p + 1 <= s) next[static_cast<std::size_t>(p) + 1] += a * v;
    }
    next[0] += in_x[static_cast<std::size_t>(i)];
    beta = std::move(next);
  }

  ChebyshevFit fit;
  constexpr int grid = 2001;
  for (int g = 0; g < grid; ++g) {
    const double lambda = upper * g / (grid - 1);
    fit.max_error = std::max(fit.max_error, std::abs(r(lambda) - eval_polynomial(beta, lambda)));
  }
  fit.coefficients = std::move(beta);
  return fit;
}

namespace {

void require_nonnegative(const std::function<double(double)>& r, const Spectrum& spectrum) {
  double scale = 1.0;
  for (Index m = 0; m < spectrum.size(); ++m) scale = std::max(scale, std::abs(r(spectrum.eigenvalue(m))));
  for (Index m = 0; m < spectrum.size(); ++m) {
    const double v = r(spectrum.eigenvalue(m));
    if (!std::isfinite(v) || v < -1e-12 * scale) {
      throw ConfigError("spectral kernel is negative on the Laplacian spectrum (r(" +
                        std::to_string(spectrum.eigenvalue(m)) + ") = " + std::to_string(v) + ")");
    }
  }
}

}  // namespace

SpectralKernel SpectralKernel::polynomial(std::vector<double> beta, const Spectrum& spectrum) {
  if (beta.empty()) throw ConfigError("spectral kernel: polynomial needs at least one coefficient");
  SpectralKernel k;
  k.coefficients_ = std::move(beta);
  require_nonnegative([&](double x) { return eval_polynomial(k.coefficients_, x); }, spectrum);
  return k;
}

SpectralKernel SpectralKernel::function(std::function<double(double)> r, int degree, const Spectrum& spectrum) {
  require_nonnegative(r, spectrum);
  const double upper = spectrum.max_eigenvalue();
  SpectralKernel k;
  if (upper > 0.0) {
    ChebyshevFit fit = chebyshev_fit(r, degree, upper);
    k.coefficients_ = std::move(fit.coefficients);
    k.fit_error_ = fit.max_error;
  } else {
    // Edgeless graph: the spectrum is {0}; the constant r(0) is exact.
    k.coefficients_.assign(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
    k.coefficients_[0] = r(0.0);
  }
  k.function_ = std::move(r);
  return k;
}

double SpectralKernel::operator()(double lambda) const {
  return function_ ? function_(lambda) : eval_polynomial(coefficients_, lambda);
}

Eigen::MatrixXd apply_spectral_kernel(const std::function<double(double)>& r, const Spectrum& spectrum) {
  require_nonnegative(r, spectrum);
  Eigen::VectorXd values(spectrum.size());
  for (Index m = 0; m < spectrum.size(); ++m) values(m) = r(spectrum.eigenvalue(m));
  const Eigen::MatrixXd& v = spectrum.eigenvectors();
  return v * values.asDiagonal() * v.transpose();
}

Eigen::MatrixXd apply_spectral_kernel(const SpectralKernel& kernel, const Spectrum& spectrum) {
  return apply_spectral_kernel([&](double x) { return kernel(x); }, spectrum);
}

}  // namespace netmtl
