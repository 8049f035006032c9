#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "netmtl/rng.hpp"
#include "netmtl/spectrum.hpp"
#include "netmtl/task_field.hpp"

namespace netmtl {

enum class ModelKind { mse, logistic };

/// Per-agent streaming data law.
///
/// mse:      d_k(i) = u_{k,i}^T w^o_k + v_k(i), u ~ N(0, R_u), v ~ N(0, sigma2_k)
/// logistic: h ~ N(0, R_u), P(gamma = +1 | h) = 1 / (1 + exp(-h^T w^o_k))
///
/// R_u is either an M x M matrix shared by all agents (uniform block length)
/// or a 1 x 1 matrix r meaning r I at every agent, which also covers agents
/// with different block lengths.
class StreamModel {
 public:
  static StreamModel mse(TaskField truth, Eigen::MatrixXd covariance, std::vector<double> noise_variances);
  static StreamModel logistic(TaskField truth, Eigen::MatrixXd covariance, double rho);

  ModelKind kind() const { return kind_; }
  const TaskField& truth() const { return truth_; }
  Index agents() const { return truth_.agents(); }
  const Eigen::MatrixXd& covariance(Index k) const { return covariance_[static_cast<std::size_t>(k)]; }
  const Eigen::MatrixXd& covariance_factor(Index k) const { return factor_[static_cast<std::size_t>(k)]; }
  double noise_variance(Index k) const { return noise_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& noise_variances() const { return noise_; }
  double rho() const { return rho_; }
  /// True when every agent shares one R_u of one block length.
  bool uniform_covariance() const { return uniform_; }

 private:
  StreamModel() = default;
  void set_covariance(const Eigen::MatrixXd& covariance);

  ModelKind kind_ = ModelKind::mse;
  TaskField truth_;
  std::vector<Eigen::MatrixXd> covariance_;
  std::vector<Eigen::MatrixXd> factor_;
  std::vector<double> noise_;
  double rho_ = 0.0;
  bool uniform_ = true;
};

/// One observation: (u, d) for mse, (h, gamma) for logistic.
struct Sample {
  Eigen::VectorXd regressor;
  double target = 0.0;
};

/// Observations for every agent at one instant, stacked like a TaskField.
struct SampleBatch {
  TaskField regressors;
  Eigen::VectorXd targets;
};

Sample mse_sample(const StreamModel& model, Index k, Rng& rng);
Sample logistic_sample(const StreamModel& model, Index k, Rng& rng);
Sample draw_sample(const StreamModel& model, Index k, Rng& rng);

/// Fills `batch` with one sample per agent, agent k drawing from rngs[k].
/// Produces the same numbers as calling draw_sample agent by agent.
void draw_samples(const StreamModel& model, std::span<Rng> rngs, SampleBatch& batch);

/// Gradient of the instantaneous loss Q_k(w; x) at w.
///   mse:      -u (d - u^T w)
///   logistic: rho w - gamma h / (1 + exp(gamma h^T w))
void instantaneous_gradient(const StreamModel& model, const Eigen::Ref<const Eigen::VectorXd>& w,
                            const Eigen::Ref<const Eigen::VectorXd>& regressor, double target,
                            Eigen::Ref<Eigen::VectorXd> out);
Eigen::VectorXd instantaneous_gradient(const StreamModel& model, Index k, const Eigen::VectorXd& w,
                                       const Sample& sample);

/// Q_k(w; x): (1/2)(d - u^T w)^2, or ln(1 + exp(-gamma h^T w)) + (rho/2)||w||^2.
double instantaneous_loss(const StreamModel& model, const Eigen::VectorXd& w, const Sample& sample);

/// Standard deviation of the spectral coefficient at eigenvalue lambda.
using AmplitudeProfile = std::function<double(double lambda)>;
inline double default_amplitude(double lambda) { return 1.0 / (1.0 + lambda); }

/// Random task field bandlimited to [0, bandwidth]: wbar_m ~ amplitude(lambda_m) N(0, I_M)
/// for lambda_m <= bandwidth, zero above, mapped back to the vertex domain.
TaskField synth_smooth_tasks(const Spectrum& spectrum, Index block_size, double bandwidth, Rng& rng,
                             const AmplitudeProfile& amplitude = default_amplitude);

}  // namespace netmtl
