#pragma once

#include <string>
#include <vector>

#include "netmtl/config.hpp"

namespace netmtl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PairOutcome {
  bool bit_identical = false;
  double max_abs_diff = 0.0;
};

/// Runs both strategies from the same initial state on the same sample
/// stream and compares every iterate.
PairOutcome compare_strategies(const Strategy& a, const Strategy& b, const StreamModel& model, Index iters,
                               std::uint64_t seed);

/// The reduction lattice of the strategies on `graph` with `model`:
///   spectral_reg with r(lambda) = lambda vs laplacian_reg,
///   laplacian_reg with eta = 0 vs noncooperative,
///   clustered with Q = 1, eta = 0 vs diffusion,
///   subspace_projection with consensus U and scalar A vs diffusion,
///   clustered with singleton clusters and l1 vs prox_l1.
/// A pair passes when bit-identical or within 1e-12 (relative to the
/// iterate scale). eta is lowered when it would fail the stability precheck.
std::vector<CheckResult> reduction_lattice(const Graph& graph, const StreamModel& model, double mu, double eta,
                                           Index iters, std::uint64_t seed);

/// Distributed S-hop step vs the dense (I - mu eta r(L) kron I) psi oracle
/// on `trials` random psi. Relative tolerance 1e-10.
CheckResult spectral_oracle_check(const Graph& graph, const std::vector<double>& beta, double mu_eta, Index block_size,
                                  std::uint64_t seed, int trials = 5);

/// Structural self-checks for one configuration at small scale: strategy
/// validation, feasibility or stochasticity of its combination matrix,
/// the spectral oracle and the reduction lattice on its graph.
std::vector<CheckResult> structural_checks(const ExperimentConfig& config);

}  // namespace netmtl
