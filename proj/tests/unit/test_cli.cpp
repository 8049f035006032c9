#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "netmtl/io.hpp"

namespace fs = std::filesystem;
using netmtl::Json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(NETMTL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  Outcome o;
  if (pipe == nullptr) return o;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("netmtl_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const Json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump(2);
    return p.string();
  }

  fs::path dir_;
};

Json base(const Json& graph, const Json& strategy) {
  return {
      {"schema", 1},
      {"graph", graph},
      {"model", {{"kind", "mse"}, {"M", 2}, {"Ru", 1.0}, {"noise", 0.1}}},
      {"tasks", {{"kind", "common"}, {"value", {1.0, -1.0}}}},
      {"strategy", strategy},
      {"iters", 200},
      {"runs", 2},
  };
}

}  // namespace

TEST_F(Cli, RunWritesTwoFiles) {
  const auto cfg = write("nc.json", base({{"kind", "ring"}, {"n", 5}}, {{"kind", "noncooperative"}, {"mu", 0.01}}));
  const auto out = dir_ / "out";
  const Outcome o = run_cli("run --config " + cfg + " --out " + out.string() + " --seed 42 --iters 150");
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(fs::exists(out / "result.csv"));
  ASSERT_TRUE(fs::exists(out / "result.json"));
  const Json side = netmtl::read_json_file(out / "result.json");
  EXPECT_EQ(side["seed"], 42);
  EXPECT_EQ(side["effective_config"]["iters"], 150);
  EXPECT_EQ(side["effective_config"]["seed"], 42);
}

TEST_F(Cli, ConfigErrors) {
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.json").string()).code, 2);
  EXPECT_EQ(run_cli("run").code, 2);
  EXPECT_EQ(run_cli("frobnicate --config x").code, 2);
  // lambda_N = 2 on the 2-node path, so mu eta = 1.5 breaks the precheck.
  const auto cfg = write("unstable.json", base({{"kind", "path"}, {"n", 2}},
                                               {{"kind", "laplacian_reg"}, {"mu", 0.1}, {"eta", 15.0}}));
  EXPECT_EQ(run_cli("run --config " + cfg + " --out " + (dir_ / "o").string()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "result.csv"));
}

TEST_F(Cli, DivergenceExitsThree) {
  const auto cfg = write("div.json", base({{"kind", "ring"}, {"n", 4}}, {{"kind", "noncooperative"}, {"mu", 3.0}}));
  EXPECT_EQ(run_cli("run --config " + cfg + " --out " + dir_.string()).code, 3);
}

TEST_F(Cli, TheoryJson) {
  Json doc = base({{"kind", "ring"}, {"n", 20}}, {{"kind", "laplacian_reg"}, {"mu", 0.01}, {"eta", 0.0}});
  const Outcome o = run_cli("theory --config " + write("t.json", doc));
  ASSERT_EQ(o.code, 0);
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j["msd_nc"].get<double>(), 1e-3, 1e-15);
  EXPECT_NEAR(j["variance"]["total"].get<double>(), j["msd_nc"].get<double>(), 1e-12);

  Json diff = base({{"kind", "ring"}, {"n", 10}},
                   {{"kind", "diffusion"}, {"mu", 0.01}, {"payload", {{"combination", "metropolis"}}}});
  const Json d = Json::parse(run_cli("theory --config " + write("d.json", diff)).out);
  EXPECT_NEAR(d["msd_projection"].get<double>(), d["msd_nc"].get<double>() / 10.0, 1e-15);

  Json logit = doc;
  logit["model"] = {{"kind", "logistic"}, {"M", 2}, {"rho", 0.1}};
  EXPECT_EQ(run_cli("theory --config " + write("l.json", logit)).code, 2);
}

TEST_F(Cli, CheckExitCodes) {
  Json spec = base({{"kind", "ring"}, {"n", 6}},
                   {{"kind", "spectral_reg"}, {"mu", 0.01}, {"eta", 1.0}, {"payload", {{"kernel", {0.0, 1.0}}}}});
  const Outcome ok = run_cli("check --json --config " + write("s.json", spec));
  EXPECT_EQ(ok.code, 0);
  const Json j = Json::parse(ok.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  bool saw_reduction = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "configured kernel == laplacian_reg") saw_reduction = c["passed"].get<bool>();
  }
  EXPECT_TRUE(saw_reduction);

  Json eye = Json::array();
  for (int k = 0; k < 6; ++k) {
    Json row = Json::array();
    for (int l = 0; l < 6; ++l) row.push_back(k == l ? 1.0 : 0.0);
    eye.push_back(row);
  }
  Json infeasible = base({{"kind", "ring"}, {"n", 6}},
                         {{"kind", "subspace_projection"},
                          {"mu", 0.01},
                          {"payload", {{"subspace", {{"type", "consensus"}}}, {"combination", eye}}}});
  const Outcome bad = run_cli("check --json --config " + write("i.json", infeasible));
  EXPECT_EQ(bad.code, 5);
  const Json b = Json::parse(bad.out);
  bool named = false;
  for (const auto& c : b["checks"]) {
    if (c["name"] == "feasibility: rho(A - P_U) < 1") named = !c["passed"].get<bool>();
  }
  EXPECT_TRUE(named);

  Json clustered = base({{"kind", "ring"}, {"n", 6}},
                        {{"kind", "clustered"},
                         {"mu", 0.01},
                         {"eta", 0.5},
                         {"payload", {{"clusters", {3, 3}}, {"rho", 1.0}}}});
  EXPECT_EQ(run_cli("check --config " + write("c.json", clustered)).code, 0);
}

TEST_F(Cli, GeneratorsAndSweep) {
  const auto cfg = write("g.json", base({{"kind", "star"}, {"leaves", 3}}, {{"kind", "laplacian_reg"}, {"mu", 0.01}}));
  const Json g = Json::parse(run_cli("gen-graph --config " + cfg).out);
  EXPECT_EQ(g["n"], 4);
  EXPECT_EQ(g["edges"].size(), 3u);
  const Json t = Json::parse(run_cli("gen-tasks --config " + cfg).out);
  EXPECT_EQ(t["M"], 2);
  const Outcome s = run_cli("sweep --config " + cfg + " --grid 0,0.5 --iters 100");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.out.rfind("eta,msd_sim,var_sim,var_theory,bias_theory\n", 0), 0u);
  EXPECT_NE(s.out.find("\n0.5,"), std::string::npos);
}
