#include "netmtl/theory.hpp"

#include <cmath>
#include <string>

#include "netmtl/error.hpp"

namespace netmtl {

namespace {

Index agents_of(const TheoryInputs& in) { return static_cast<Index>(in.noise.size()); }

void check_common(const TheoryInputs& in) {
  if (!(in.mu >= 0.0)) throw ConfigError("theory: mu must be nonnegative");
  if (!(in.eta >= 0.0)) throw ConfigError("theory: eta must be nonnegative");
  if (in.block_size < 1) throw ConfigError("theory: block length M must be positive");
  if (in.noise.empty()) throw ConfigError("theory: noise profile is empty");
}

Eigen::VectorXd covariance_eigenvalues(const TheoryInputs& in) {
  if (in.ru.rows() != in.block_size || in.ru.cols() != in.block_size) {
    throw ConfigError("theory: R_u must be " + std::to_string(in.block_size) + " x " + std::to_string(in.block_size));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(in.ru, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("theory: eigensolver failed on R_u");
  if (!(eig.eigenvalues()(0) > 0.0)) throw ConfigError("theory: R_u must be positive definite");
  return eig.eigenvalues();
}

const Spectrum& spectrum_of(const TheoryInputs& in) {
  if (!in.spectrum) throw ConfigError("theory: graph spectrum required");
  if (in.spectrum->size() != agents_of(in)) throw ConfigError("theory: spectrum size does not match the noise profile");
  return *in.spectrum;
}

}  // namespace

Eigen::VectorXd kernel_on_spectrum(const TheoryInputs& in) {
  const Spectrum& sp = spectrum_of(in);
  Eigen::VectorXd r(sp.size());
  const double slack = 1e-12 * std::max(1.0, sp.max_eigenvalue());
  for (Index m = 0; m < sp.size(); ++m) {
    const double lambda = std::max(sp.eigenvalue(m), 0.0);
    r(m) = in.kernel ? in.kernel(lambda) : lambda;
    if (!(r(m) >= -slack)) throw ConfigError("theory: kernel is negative on the Laplacian spectrum");
    r(m) = std::max(r(m), 0.0);
  }
  return r;
}

NoncooperativeMsd msd_noncooperative(const TheoryInputs& in) {
  check_common(in);
  NoncooperativeMsd out;
  const double scale = 0.5 * in.mu * static_cast<double>(in.block_size);
  out.agents.resize(agents_of(in));
  double sum = 0.0;
  for (Index k = 0; k < agents_of(in); ++k) {
    out.agents(k) = scale * in.noise[static_cast<std::size_t>(k)];
    sum += in.noise[static_cast<std::size_t>(k)];
  }
  out.network = scale * sum / static_cast<double>(agents_of(in));
  return out;
}

ModeBreakdown variance_smoothness(const TheoryInputs& in) {
  check_common(in);
  const Eigen::VectorXd lu = covariance_eigenvalues(in);
  const Spectrum& sp = spectrum_of(in);
  const Eigen::VectorXd r = kernel_on_spectrum(in);
  const Index n = sp.size();
  const Eigen::MatrixXd& v = sp.eigenvectors();
  ModeBreakdown out;
  out.modes.resize(n);
  for (Index m = 0; m < n; ++m) {
    double weighted = 0.0;
    for (Index k = 0; k < n; ++k) weighted += v(k, m) * v(k, m) * in.noise[static_cast<std::size_t>(k)];
    double ratio = 0.0;
    for (Index q = 0; q < lu.size(); ++q) ratio += lu(q) / (lu(q) + in.eta * r(m));
    out.modes(m) = in.mu / (2.0 * static_cast<double>(n)) * weighted * ratio;
  }
  out.total = out.modes.sum();
  return out;
}

BiasResult bias_smoothness(const TheoryInputs& in) {
  check_common(in);
  covariance_eigenvalues(in);
  const Spectrum& sp = spectrum_of(in);
  if (!in.truth) throw ConfigError("theory: bias requires the true task field W^o");
  if (in.truth->agents() != sp.size() || in.truth->uniform_block_size() != in.block_size) {
    throw ConfigError("theory: W^o shape does not match the inputs");
  }
  const Eigen::VectorXd r = kernel_on_spectrum(in);
  const TaskField bar = graph_fourier(*in.truth, sp);
  TaskField bar_star(bar.block_sizes());
  BiasResult out;
  out.modes.resize(sp.size());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(in.block_size, in.block_size);
  for (Index m = 0; m < sp.size(); ++m) {
    const double a = in.eta * r(m);
    const Eigen::LDLT<Eigen::MatrixXd> solve(in.ru + a * eye);
    const Eigen::VectorXd wo = bar.block(m);
    const Eigen::VectorXd shrink = a * solve.solve(wo);
    bar_star.block(m) = solve.solve(in.ru * wo);
    out.modes(m) = shrink.squaredNorm();
  }
  out.total = out.modes.sum();
  out.optimum = inverse_graph_fourier(bar_star, sp);
  return out;
}

double msd_projection(const TheoryInputs& in) {
  check_common(in);
  if (!in.subspace_columns) throw ConfigError("theory: projection MSD requires subspace columns");
  const Eigen::MatrixXd& u = *in.subspace_columns;
  if (u.rows() != agents_of(in)) throw ConfigError("theory: subspace columns do not match the agents");
  const Eigen::MatrixXd gram = u.transpose() * u;
  if ((gram - Eigen::MatrixXd::Identity(u.cols(), u.cols())).norm() > 1e-10 * std::sqrt(static_cast<double>(u.cols()))) {
    throw ConfigError("theory: projection MSD requires a semi-orthogonal basis (U^T U = I)");
  }
  double sum = 0.0;
  for (Index m = 0; m < u.cols(); ++m) {
    for (Index k = 0; k < u.rows(); ++k) sum += u(k, m) * u(k, m) * in.noise[static_cast<std::size_t>(k)];
  }
  return in.mu * static_cast<double>(in.block_size) / (2.0 * static_cast<double>(agents_of(in))) * sum;
}

Eigen::VectorXd filter_bound(const TheoryInputs& in) {
  check_common(in);
  const Eigen::VectorXd lu = covariance_eigenvalues(in);
  const Eigen::VectorXd r = kernel_on_spectrum(in);
  const double tol = 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff());
  for (Index m = 1; m < r.size(); ++m) {
    if (r(m) < r(m - 1) - tol) throw ConfigError("theory: filter bound requires a nondecreasing kernel");
  }
  const double lmax = lu.maxCoeff();
  Eigen::VectorXd ratio(r.size());
  for (Index m = 0; m < r.size(); ++m) ratio(m) = lmax / (lmax + in.eta * r(m));
  if (in.truth) {
    const BiasResult bias = bias_smoothness(in);
    const TaskField bar = graph_fourier(*in.truth, *in.spectrum);
    const TaskField bar_star = graph_fourier(bias.optimum, *in.spectrum);
    for (Index m = 0; m < r.size(); ++m) {
      if (bar_star.block(m).norm() > ratio(m) * bar.block(m).norm() + 1e-12 * std::max(1.0, bar.block(m).norm())) {
        throw NumericalError("theory: W* violates the low-pass bound on mode " + std::to_string(m));
      }
    }
  }
  return ratio;
}

}  // namespace netmtl
