#include "netmtl/data.hpp"

#include <cmath>
#include <string>

#include "netmtl/error.hpp"

namespace netmtl {

void StreamModel::set_covariance(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw ConfigError("stream model: regressor covariance must be square");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, covariance.norm())) {
    throw ConfigError("stream model: regressor covariance is not symmetric");
  }
  const bool scalar = covariance.rows() == 1;
  uniform_ = truth_.has_uniform_blocks() && (scalar || truth_.agents() == 0 ||
                                             truth_.block_size(0) == covariance.rows());
  if (!scalar && !uniform_) {
    throw ConfigError("stream model: covariance size does not match the agent block lengths");
  }
  for (Index k = 0; k < truth_.agents(); ++k) {
    const Index m = truth_.block_size(k);
    Eigen::MatrixXd r = scalar ? Eigen::MatrixXd(covariance(0, 0) * Eigen::MatrixXd::Identity(m, m))
                               : covariance;
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) {
      throw ConfigError("stream model: regressor covariance is not positive definite");
    }
    factor_.push_back(llt.matrixL());
    covariance_.push_back(std::move(r));
  }
}

StreamModel StreamModel::mse(TaskField truth, Eigen::MatrixXd covariance, std::vector<double> noise_variances) {
  StreamModel m;
  m.kind_ = ModelKind::mse;
  m.truth_ = std::move(truth);
  if (static_cast<Index>(noise_variances.size()) != m.truth_.agents()) {
    throw ConfigError("stream model: noise profile length " + std::to_string(noise_variances.size()) +
                      " does not match " + std::to_string(m.truth_.agents()) + " agents");
  }
  for (double s : noise_variances) {
    // Zero is admitted as the noiseless limit.
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("stream model: noise variances must be nonnegative");
  }
  m.noise_ = std::move(noise_variances);
  m.set_covariance(covariance);
  return m;
}

StreamModel StreamModel::logistic(TaskField truth, Eigen::MatrixXd covariance, double rho) {
  if (!(rho >= 0.0)) throw ConfigError("stream model: logistic regularization must be nonnegative");
  StreamModel m;
  m.kind_ = ModelKind::logistic;
  m.truth_ = std::move(truth);
  m.rho_ = rho;
  m.noise_.assign(static_cast<std::size_t>(m.truth_.agents()), 0.0);
  m.set_covariance(covariance);
  return m;
}

namespace {

void draw_into(const StreamModel& model, Index k, Rng& rng, Eigen::Ref<Eigen::VectorXd> regressor,
               double& target) {
  const Eigen::MatrixXd& factor = model.covariance_factor(k);
  const Index m = regressor.size();
  // Standard normals first, then the factor, so both draw paths agree.
  for (Index j = 0; j < m; ++j) regressor(j) = rng.normal();
  // In-place lower-triangular product, bottom row first.
  for (Index j = m - 1; j >= 0; --j) {
    double acc = 0.0;
    for (Index i = 0; i <= j; ++i) acc += factor(j, i) * regressor(i);
    regressor(j) = acc;
  }
  const double score = regressor.dot(model.truth().block(k));
  if (model.kind() == ModelKind::mse) {
    target = score + std::sqrt(model.noise_variance(k)) * rng.normal();
  } else {
    const double p = 1.0 / (1.0 + std::exp(-score));
    target = rng.uniform() < p ? 1.0 : -1.0;
  }
}

}  // namespace

Sample draw_sample(const StreamModel& model, Index k, Rng& rng) {
  Sample s;
  s.regressor.resize(model.truth().block_size(k));
  draw_into(model, k, rng, s.regressor, s.target);
  return s;
}

Sample mse_sample(const StreamModel& model, Index k, Rng& rng) {
  if (model.kind() != ModelKind::mse) throw ConfigError("mse_sample: model is not an mse model");
  return draw_sample(model, k, rng);
}

Sample logistic_sample(const StreamModel& model, Index k, Rng& rng) {
  if (model.kind() != ModelKind::logistic) throw ConfigError("logistic_sample: model is not a logistic model");
  return draw_sample(model, k, rng);
}

void draw_samples(const StreamModel& model, std::span<Rng> rngs, SampleBatch& batch) {
  const Index n = model.agents();
  if (static_cast<Index>(rngs.size()) != n) throw ConfigError("draw_samples: one rng per agent required");
  if (!batch.regressors.same_shape(model.truth())) batch.regressors = TaskField(model.truth().block_sizes());
  if (batch.targets.size() != n) batch.targets.resize(n);
  for (Index k = 0; k < n; ++k) {
    draw_into(model, k, rngs[static_cast<std::size_t>(k)], batch.regressors.block(k), batch.targets(k));
  }
}

void instantaneous_gradient(const StreamModel& model, const Eigen::Ref<const Eigen::VectorXd>& w,
                            const Eigen::Ref<const Eigen::VectorXd>& regressor, double target,
                            Eigen::Ref<Eigen::VectorXd> out) {
  if (w.size() != regressor.size() || out.size() != w.size()) {
    throw ConfigError("instantaneous_gradient: dimension mismatch");
  }
  if (model.kind() == ModelKind::mse) {
    out = -(target - regressor.dot(w)) * regressor;
  } else {
    const double margin = target * regressor.dot(w);
    out = model.rho() * w - (target / (1.0 + std::exp(margin))) * regressor;
  }
}

Eigen::VectorXd instantaneous_gradient(const StreamModel& model, Index k, const Eigen::VectorXd& w,
                                       const Sample& sample) {
  if (w.size() != model.truth().block_size(k)) throw ConfigError("instantaneous_gradient: block length mismatch");
  Eigen::VectorXd g(w.size());
  instantaneous_gradient(model, w, sample.regressor, sample.target, g);
  return g;
}

double instantaneous_loss(const StreamModel& model, const Eigen::VectorXd& w, const Sample& sample) {
  const double score = sample.regressor.dot(w);
  if (model.kind() == ModelKind::mse) {
    const double e = sample.target - score;
    return 0.5 * e * e;
  }
  return std::log1p(std::exp(-sample.target * score)) + 0.5 * model.rho() * w.squaredNorm();
}

TaskField synth_smooth_tasks(const Spectrum& spectrum, Index block_size, double bandwidth, Rng& rng,
                             const AmplitudeProfile& amplitude) {
  if (!(bandwidth >= 0.0)) throw ConfigError("synth_smooth_tasks: bandwidth must be nonnegative");
  if (block_size < 1) throw ConfigError("synth_smooth_tasks: block length must be positive");
  const Index n = spectrum.size();
  // Eigenvalues carry rounding; lambda_1 may come out as +1e-16.
  const double slack = 1e-10 * std::max(1.0, spectrum.max_eigenvalue());
  TaskField bar = TaskField::uniform(n, block_size);
  for (Index m = 0; m < n; ++m) {
    const double lambda = spectrum.eigenvalue(m);
    if (lambda > bandwidth + slack) continue;
    const double a = amplitude(std::max(lambda, 0.0));
    for (Index j = 0; j < block_size; ++j) bar.block(m)(j) = a * rng.normal();
  }
  return inverse_graph_fourier(bar, spectrum);
}

}  // namespace netmtl
