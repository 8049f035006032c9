#include <gtest/gtest.h>

#include <cmath>

#include "netmtl/error.hpp"
#include "netmtl/harness.hpp"

using namespace netmtl;

namespace {

Json small_doc(const std::string& strategy_kind, double noise = 0.1) {
  Json doc = {
      {"schema", 1},
      {"graph", {{"kind", "ring"}, {"n", 6}}},
      {"model", {{"kind", "mse"}, {"M", 2}, {"Ru", 1.0}, {"noise", noise}}},
      {"tasks", {{"kind", "random"}, {"scale", 1.0}, {"seed", 3}}},
      {"strategy", {{"kind", strategy_kind}, {"mu", 0.02}}},
      {"iters", 400},
      {"runs", 6},
      {"seed", 9},
      {"window", 0.25},
  };
  if (strategy_kind == "laplacian_reg") doc["strategy"]["eta"] = 1.0;
  if (strategy_kind == "diffusion") doc["strategy"]["payload"] = {{"combination", "metropolis"}};
  return doc;
}

}  // namespace

TEST(SteadyState, ConstantTrajectory) {
  const Eigen::MatrixXd runs = Eigen::MatrixXd::Constant(4, 50, 2.5);
  const SteadyState s = steady_state(runs, 0.1);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_EQ(s.std_error, 0.0);
  EXPECT_EQ(s.window, 5);
  EXPECT_FALSE(s.nonstationary);
}

TEST(SteadyState, SettledAfterBurnIn) {
  Rng rng(1);
  Eigen::MatrixXd runs(20, 1000);
  for (Index r = 0; r < 20; ++r) {
    for (Index t = 0; t < 1000; ++t) runs(r, t) = 1.0 + 10.0 * std::exp(-0.05 * t) + 0.01 * rng.normal();
  }
  const SteadyState s = steady_state(runs, 0.1);
  EXPECT_NEAR(s.mean, 1.0, 5.0 * s.std_error + 1e-3);
  EXPECT_GT(s.std_error, 0.0);
  EXPECT_FALSE(s.nonstationary);
}

TEST(SteadyState, RampIsFlagged) {
  Eigen::VectorXd ramp(200);
  for (Index t = 0; t < 200; ++t) ramp(t) = 1.0 + static_cast<double>(t);
  EXPECT_TRUE(steady_state(ramp, 0.5).nonstationary);
}

TEST(SteadyState, Errors) {
  const Eigen::MatrixXd runs = Eigen::MatrixXd::Ones(2, 10);
  EXPECT_THROW(steady_state_window(runs, 11), ConfigError);
  EXPECT_THROW(steady_state(runs, 0.0), ConfigError);
  EXPECT_THROW(steady_state(runs, 1.5), ConfigError);
  // Cross-run standard error from per-run window means 1 and 3.
  Eigen::MatrixXd two(2, 4);
  two << 1, 1, 1, 1, 3, 3, 3, 3;
  const SteadyState s = steady_state(two, 1.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.std_error, 1.0, 1e-15);
}

TEST(Compare, Arithmetic) {
  const auto same = compare_theory({{"msd", 5e-4}}, {{"msd", 5e-4}}, 0.0);
  EXPECT_EQ(same[0].status, CompareStatus::pass);
  const auto close = compare_theory({{"msd", 5.4e-4}}, {{"msd", 5e-4}}, 0.1);
  EXPECT_EQ(close[0].status, CompareStatus::pass);
  EXPECT_NEAR(close[0].relative_error, 0.08, 1e-12);
  EXPECT_NEAR(close[0].margin, 0.02, 1e-12);
  const auto far = compare_theory({{"msd", 6e-4}}, {{"msd", 5e-4}}, 0.1);
  EXPECT_EQ(far[0].status, CompareStatus::fail);
  EXPECT_NEAR(far[0].relative_error, 0.2, 1e-12);
  const auto none = compare_theory({{"bias", 1.0}}, {}, 0.1);
  EXPECT_EQ(none[0].status, CompareStatus::skipped);
  EXPECT_FALSE(none[0].notice.empty());
}

TEST(Experiment, SameSeedIsBitIdentical) {
  ExperimentConfig a = parse_config(small_doc("laplacian_reg"));
  ExperimentConfig b = a;
  b.parallel = 4;
  const ExperimentResult ra = run_experiment(a);
  const ExperimentResult rb = run_experiment(b);
  EXPECT_EQ(result_csv(ra), result_csv(rb));
  EXPECT_EQ(ra.runs_wo, rb.runs_wo);
  EXPECT_EQ(ra.config_hash, rb.config_hash);
  // Runs differ from each other.
  EXPECT_NE(ra.runs_wo.row(0), ra.runs_wo.row(1));
  ExperimentConfig c = a;
  c.seed = 10;
  EXPECT_NE(result_csv(run_experiment(c)), result_csv(ra));
}

TEST(Experiment, NoiselessConverges) {
  Json doc = small_doc("noncooperative", 0.0);
  doc["iters"] = 3000;
  doc["runs"] = 1;
  const ExperimentResult r = run_experiment(parse_config(doc));
  EXPECT_LT(r.msd_wo(r.msd_wo.size() - 1), 1e-10 * r.msd_wo(0));
  for (Index i = 0; i < r.msd_wo.size(); ++i) EXPECT_TRUE(std::isfinite(r.msd_wo(i)) && r.msd_wo(i) >= 0.0);
}

TEST(Experiment, DivergenceNamesStepSize) {
  Json doc = small_doc("noncooperative");
  doc["strategy"]["mu"] = 3.0;
  try {
    run_experiment(parse_config(doc));
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("mu=3"), std::string::npos);
  }
}

TEST(Experiment, CsvAndSidecar) {
  Json doc = small_doc("laplacian_reg");
  doc["decimate"] = 7;
  const ExperimentResult r = run_experiment(parse_config(doc));
  const std::string csv = result_csv(r);
  EXPECT_EQ(csv.rfind("iter,msd_wo,msd_wstar,stderr\n", 0), 0u);
  EXPECT_NE(csv.find("\n7,"), std::string::npos);
  EXPECT_EQ(csv.find("\n8,"), std::string::npos);
  EXPECT_NE(csv.find("\n400,"), std::string::npos);
  const Json side = result_sidecar(r);
  EXPECT_EQ(side["seed"], 9);
  EXPECT_EQ(side["config_hash"], r.config_hash);
  EXPECT_TRUE(side["theory"]["variance"].is_object());
  EXPECT_DOUBLE_EQ(side["effective_config"]["strategy"]["eta"].get<double>(), 1.0);
  ASSERT_TRUE(r.optimum_gap.has_value());
  EXPECT_NEAR(*r.optimum_gap, r.theory.bias->total, 1e-9 * r.theory.bias->total);
}

TEST(Sweep, ZeroGridMatchesNoncooperative) {
  const ExperimentConfig cfg = parse_config(small_doc("laplacian_reg"));
  const SweepResult s = eta_sweep(cfg, {0.0});
  ASSERT_EQ(s.rows.size(), 1u);
  ASSERT_TRUE(s.rows[0].bias_theory.has_value());
  EXPECT_EQ(*s.rows[0].bias_theory, 0.0);
  Json nc = small_doc("noncooperative");
  const ExperimentResult r = run_experiment(parse_config(nc));
  EXPECT_EQ(s.rows[0].msd_sim, r.steady_wo.mean);
  EXPECT_EQ(sweep_csv(s).rfind("eta,msd_sim,var_sim,var_theory,bias_theory\n", 0), 0u);
  EXPECT_THROW(eta_sweep(cfg, {}), ConfigError);
  EXPECT_THROW(eta_sweep(cfg, {-1.0}), ConfigError);
}

TEST(Experiment, NoiseLinearity) {
  Json doc = small_doc("noncooperative");
  doc["iters"] = 2000;
  doc["runs"] = 40;
  const double base = run_experiment(parse_config(doc)).steady_wo.mean;
  doc["model"]["noise"] = 0.2;
  const double doubled = run_experiment(parse_config(doc)).steady_wo.mean;
  EXPECT_NEAR(doubled / base, 2.0, 0.2);
}

TEST(Theory, PredictionsAttachToKinds) {
  const ExperimentConfig diff = parse_config(small_doc("diffusion"));
  const Scenario sc = build_scenario(diff);
  const TheoryReport rep = predict(sc, build_strategy(diff, sc));
  ASSERT_TRUE(rep.msd_projection.has_value());
  EXPECT_NEAR(*rep.msd_projection, rep.noncooperative->network / 6.0, 1e-15);
  EXPECT_FALSE(rep.variance.has_value());
  const Json j = theory_to_json(rep);
  EXPECT_TRUE(j["variance"].is_null());
  EXPECT_NEAR(j["msd_nc"].get<double>(), 0.02 * 2 / 2 * 0.1, 1e-15);
}
