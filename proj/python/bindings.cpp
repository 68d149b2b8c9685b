#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hcarleson/geometry.hpp"
#include "hcarleson/harmonic.hpp"
#include "hcarleson/measures.hpp"
#include "hcarleson/norms.hpp"
#include "hcarleson/report.hpp"
#include "hcarleson/runner.hpp"
#include "hcarleson/verifiers.hpp"

namespace py = pybind11;

namespace {

hc::Point to_point(const std::vector<double>& c) {
  if (c.size() < 3) throw hc::ParameterError("a point needs n + 1 >= 3 coordinates");
  return hc::Point(std::span<const double>(c.data(), c.size() - 1), c.back());
}

hc::Window to_window(int n, int level_min, int level_max, double x_half_width) {
  return hc::Window{n, level_min, level_max, x_half_width};
}

hc::QuadratureConfig to_quad(int nodes, int depth, double rel_tol, int workers) {
  hc::QuadratureConfig q;
  q.nodes_per_axis = nodes;
  q.refinement_depth = depth;
  q.rel_tol = rel_tol;
  q.workers = workers;
  q.validate();
  return q;
}

}  // namespace

PYBIND11_MODULE(_hcarleson, m) {
  m.doc() = "Whitney cubes, harmonic test functions and Carleson checks";
  m.attr("__version__") = hc::version_string();

  // Translators are tried newest first, so the base class goes in first.
  const auto base = py::register_exception<hc::Error>(m, "Error", PyExc_RuntimeError);
  const auto param = py::register_exception<hc::ParameterError>(m, "ParameterError", base);
  py::register_exception<hc::ConfigError>(m, "ConfigError", param);

  m.def(
      "cube_count",
      [](int n, int level_min, int level_max, double r) {
        return hc::WhitneyDecomposition(to_window(n, level_min, level_max, r)).size();
      },
      py::arg("n"), py::arg("level_min"), py::arg("level_max"), py::arg("x_half_width"));

  m.def(
      "cube_centers",
      [](int n, int level_min, int level_max, double r) {
        const hc::WhitneyDecomposition d(to_window(n, level_min, level_max, r));
        std::vector<std::vector<double>> out;
        out.reserve(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
          const hc::Point c = d[i].center();
          out.emplace_back(c.all().begin(), c.all().end());
        }
        return out;
      },
      py::arg("n"), py::arg("level_min"), py::arg("level_max"), py::arg("x_half_width"));

  m.def(
      "test_function",
      [](const std::vector<double>& w, int l, const std::vector<double>& z) {
        return hc::HarmonicFunction::test(to_point(w), l)(to_point(z));
      },
      py::arg("w"), py::arg("l"), py::arg("z"), "f_{w,l}(z), the l-th height derivative of |z - w_bar|^(1-n).");

  m.def(
      "combo_value",
      [](int n, std::uint64_t seed, int size, const std::vector<double>& anchor, const std::vector<double>& z) {
        return hc::make_combo(n, seed, size, to_point(anchor), hc::ZooOptions{})(to_point(z));
      },
      py::arg("n"), py::arg("seed"), py::arg("size"), py::arg("anchor"), py::arg("z"));

  m.def(
      "norm_A",
      [](const std::vector<double>& w, int l, double p, double lambda, int level_min, int level_max, double r,
         int nodes, int depth, double rel_tol) {
        const auto f = hc::HarmonicFunction::test(to_point(w), l);
        const hc::WhitneyDecomposition d(to_window(static_cast<int>(w.size()) - 1, level_min, level_max, r));
        return hc::norm_A(f, p, lambda, d, to_quad(nodes, depth, rel_tol, 1)).value;
      },
      py::arg("w"), py::arg("l"), py::arg("p"), py::arg("lam") = 0.0, py::arg("level_min") = -2,
      py::arg("level_max") = 1, py::arg("x_half_width") = 4.0, py::arg("nodes") = 2, py::arg("depth") = 3,
      py::arg("rel_tol") = 1e-3);

  m.def(
      "carleson_sweep",
      [](double gamma, double exponent, int n, int level_min, int level_max, double r) {
        const hc::WhitneyDecomposition d(to_window(n, level_min, level_max, r));
        return hc::carleson_to_json(hc::carleson_sweep(hc::Measure::m_lambda(gamma), d, exponent)).dump();
      },
      py::arg("gamma"), py::arg("exponent"), py::arg("n") = 2, py::arg("level_min") = -2, py::arg("level_max") = 1,
      py::arg("x_half_width") = 4.0, "Level profile as a JSON string.");

  m.def(
      "check_lemma",
      [](const std::string& name) {
        const hc::LemmaId id = hc::parse_lemma(name);
        hc::VerifierConfig cfg;
        return hc::report_to_json(hc::check_equivalence(id, hc::default_lemma_params(id), cfg)).dump();
      },
      py::arg("name"), "Runs one equivalence check with default parameters; returns the report as JSON.");

  m.def(
      "run_config",
      [](const std::string& config_json, const std::string& out_dir) {
        const hc::RunConfig cfg = hc::parse_run_config(hc::json::parse(config_json));
        hc::RunOptions opts;
        opts.out_dir = out_dir;
        std::ostringstream out, err;
        const hc::RunResult r = hc::run(cfg, opts, out, err);
        return py::make_tuple(r.exit_code, r.files, out.str(), err.str());
      },
      py::arg("config_json"), py::arg("out_dir"),
      "Parses and runs a config; returns (exit_code, files, stdout, stderr). Raises ConfigError on schema errors.");

  m.def("list_theorems", &hc::list_theorems);
}
