#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netmtl/checks.hpp"
#include "netmtl/error.hpp"
#include "netmtl/harness.hpp"

namespace py = pybind11;
using namespace netmtl;

namespace {

// Configs cross the boundary as JSON text; the Python wrapper handles dicts.
ExperimentConfig config_from(const std::string& text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, base_dir);
}

std::string run_json(const std::string& text, const std::string& base_dir, std::optional<std::uint64_t> seed,
                     std::optional<Index> iters, std::optional<Index> runs, std::optional<int> parallel) {
  ExperimentConfig c = config_from(text, base_dir);
  Overrides o;
  o.seed = seed;
  o.iters = iters;
  o.runs = runs;
  o.parallel = parallel;
  apply_overrides(c, o);
  ExperimentResult res;
  {
    py::gil_scoped_release release;
    res = run_experiment(c);
  }
  Json j = result_sidecar(res);
  j["msd_wo"] = std::vector<double>(res.msd_wo.data(), res.msd_wo.data() + res.msd_wo.size());
  j["msd_wstar"] = std::vector<double>(res.msd_wstar.data(), res.msd_wstar.data() + res.msd_wstar.size());
  j["csv"] = result_csv(res);
  return j.dump();
}

std::string theory_json(const std::string& text, const std::string& base_dir) {
  const ExperimentConfig c = config_from(text, base_dir);
  const Scenario sc = build_scenario(c);
  const Strategy s = build_strategy(c, sc);
  theory_inputs(sc, s);
  return theory_to_json(predict(sc, s)).dump();
}

std::string check_json(const std::string& text, const std::string& base_dir) {
  const ExperimentConfig c = config_from(text, base_dir);
  Json out = Json::array();
  for (const auto& ch : structural_checks(c)) out.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_netmtl, m) {
  m.doc() = "netmtl core bindings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("run_json", &run_json, py::arg("config"), py::arg("base_dir") = "", py::arg("seed") = py::none(),
        py::arg("iters") = py::none(), py::arg("runs") = py::none(), py::arg("parallel") = py::none());
  m.def("theory_json", &theory_json, py::arg("config"), py::arg("base_dir") = "");
  m.def("check_json", &check_json, py::arg("config"), py::arg("base_dir") = "");

  m.def(
      "laplacian_spectrum",
      [](const Eigen::MatrixXd& adjacency) {
        const Spectrum s{Graph(adjacency)};
        return py::make_tuple(s.eigenvalues(), s.eigenvectors());
      },
      py::arg("adjacency"), "Ascending eigenvalues and eigenvectors of the graph Laplacian.");
  m.def(
      "metropolis_weights", [](const Eigen::MatrixXd& adjacency) { return metropolis_weights(Graph(adjacency)).scalar_weights(); },
      py::arg("adjacency"));
  m.def(
      "social_spectral",
      [](const Eigen::MatrixXd& psi_rows, const Eigen::MatrixXd& adjacency, const std::vector<double>& beta,
         double mu_eta) {
        return social_spectral(TaskField::from_rows(psi_rows), Graph(adjacency), beta, mu_eta).as_rows();
      },
      py::arg("psi"), py::arg("adjacency"), py::arg("beta"), py::arg("mu_eta"),
      "S-hop polynomial social step; psi holds one agent per row.");
  m.def(
      "prox_l1_scalar",
      [](double anchor, const std::vector<double>& points, const std::vector<double>& weights, double gamma) {
        return prox_l1_scalar(anchor, points, weights, gamma);
      },
      py::arg("anchor"), py::arg("points"), py::arg("weights"), py::arg("gamma"));
  m.def(
      "msd_noncooperative",
      [](double mu, Index block_size, const std::vector<double>& noise) {
        TheoryInputs in;
        in.mu = mu;
        in.block_size = block_size;
        in.noise = noise;
        in.ru = Eigen::MatrixXd::Identity(block_size, block_size);
        const auto r = msd_noncooperative(in);
        return py::make_tuple(r.agents, r.network);
      },
      py::arg("mu"), py::arg("block_size"), py::arg("noise"));
}
