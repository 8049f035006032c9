#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "netmtl/spectrum.hpp"
#include "netmtl/task_field.hpp"

namespace netmtl {

/// Inputs of the closed-form predictors. All agents share one block length M
/// and one regressor covariance R_u (M x M).
struct TheoryInputs {
  double mu = 0.0;
  double eta = 0.0;
  Index block_size = 0;
  std::vector<double> noise;  // sigma^2_{v,k}
  Eigen::MatrixXd ru;
  std::optional<Spectrum> spectrum;
  /// r(lambda); empty means r(lambda) = lambda.
  std::function<double(double)> kernel;
  std::optional<TaskField> truth;
  /// N x Pbar columns u_m of U = U_s kron I_M (must be semi-orthogonal).
  std::optional<Eigen::MatrixXd> subspace_columns;
};

struct NoncooperativeMsd {
  Eigen::VectorXd agents;  // MSD_k
  double network = 0.0;
};

struct ModeBreakdown {
  double total = 0.0;
  Eigen::VectorXd modes;
};

struct BiasResult {
  double total = 0.0;      // ||W^o - W*||^2
  Eigen::VectorXd modes;   // zeta(lambda_m), m = 1..N
  TaskField optimum;       // W*
};

/// MSD_k = (mu M / 2) sigma^2_k and their mean.
NoncooperativeMsd msd_noncooperative(const TheoryInputs& in);

/// phi(lambda_m) = (mu / 2N) (sum_k [v_m]_k^2 sigma^2_k) (sum_q lambda_{u,q} / (lambda_{u,q} + eta r(lambda_m))).
ModeBreakdown variance_smoothness(const TheoryInputs& in);

/// zeta(lambda_m) = ||eta r_m (R_u + eta r_m I)^{-1} wbar^o_m||^2 and
/// W* from wbar*_m = (R_u + eta r_m I)^{-1} R_u wbar^o_m.
BiasResult bias_smoothness(const TheoryInputs& in);

/// (mu M / 2N) sum_m sum_k [u_m]_k^2 sigma^2_k.
double msd_projection(const TheoryInputs& in);

/// lambda_{u,max} / (lambda_{u,max} + eta r(lambda_m)) per mode. When the
/// truth is supplied, also checks ||wbar*_m|| <= ratio ||wbar^o_m|| and throws
/// NumericalError otherwise.
Eigen::VectorXd filter_bound(const TheoryInputs& in);

/// r(lambda_m) for every Laplacian eigenvalue.
Eigen::VectorXd kernel_on_spectrum(const TheoryInputs& in);

}  // namespace netmtl
