#include "gibbs/criteria.hpp"
#include "gibbs/drift.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/estimator.hpp"
#include "gibbs/wick.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gibbs;

namespace {

ModelParams model(int d, int n, const std::string& alpha) { return {d, n, parse_rational(alpha)}; }

py::dict verdict_dict(const Verdict& v) {
  py::dict out;
  out["status"] = to_string(v.status);
  out["claim"] = v.claim;
  out["theorem"] = v.theorem;
  out["witness"] = v.witness ? py::object(py::str(to_string(*v.witness))) : py::object(py::none());
  py::list ev;
  for (const auto& [k, val] : v.evidence) ev.append(py::make_tuple(k, val));
  out["evidence"] = ev;
  out["notes"] = v.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_gibbsnorm, m) {
  m.doc() = "Normalizability criteria and Monte Carlo tools for Wick-ordered Gibbs measures";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InconsistencyError>(m, "InconsistencyError", PyExc_RuntimeError);

  m.def(
      "classify",
      [](const std::string& poly, int d, int n, const std::string& alpha) {
        const ModelParams p = model(d, n, alpha);
        const Polynomial F = parse_polynomial(poly, n);
        Verdict v;
        {
          py::gil_scoped_release nogil;
          v = classify_normalizability(F, p);
        }
        return verdict_dict(v);
      },
      py::arg("polynomial"), py::arg("d"), py::arg("n"), py::arg("alpha"));
  m.def(
      "check_taming",
      [](const std::string& poly, int d, int n, const std::string& alpha) {
        const ModelParams p = model(d, n, alpha);
        const Polynomial F = parse_polynomial(poly, n);
        Verdict v;
        {
          py::gil_scoped_release nogil;
          v = check_grand_canonical(F, p);
        }
        return verdict_dict(v);
      },
      py::arg("polynomial"), py::arg("d"), py::arg("n"), py::arg("alpha"));

  m.def("hermite", &hermite, py::arg("l"), py::arg("x"), py::arg("sigma"));
  m.def("sigma_alpha_N", &sigma_alpha_N, py::arg("d"), py::arg("alpha"), py::arg("N"));

  m.def(
      "wick_value",
      [](const std::string& poly, int d, int n, const std::string& alpha, int N, std::uint64_t seed,
         std::uint64_t replica) {
        const ModelParams p = model(d, n, alpha);
        const WickReport r = wick_interaction(parse_polynomial(poly, n), p, sample_field(p, N, seed, replica));
        py::dict out;
        out["value"] = r.value;
        out["sigma"] = r.sigma;
        out["grid"] = r.grid;
        out["wick_l2"] = r.wick_l2;
        return out;
      },
      py::arg("polynomial"), py::arg("d"), py::arg("n"), py::arg("alpha"), py::arg("N"), py::arg("seed") = 1,
      py::arg("replica") = 0);

  m.def(
      "estimate_z",
      [](const std::string& poly, int d, int n, const std::string& alpha, std::vector<int> cutoffs, int samples,
         std::uint64_t seed, double L, int threads) {
        const ModelParams p = model(d, n, alpha);
        const Polynomial F = parse_polynomial(poly, n);
        EstimatorConfig cfg;
        cfg.cutoffs = std::move(cutoffs);
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.L = L;
        cfg.threads = threads;
        std::vector<EstimateRow> rows;
        {
          py::gil_scoped_release nogil;
          rows = estimate_log_z(F, p, cfg);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict row;
          row["N"] = r.N;
          row["samples"] = r.samples;
          row["mean"] = r.mean;
          row["se"] = r.se;
          row["truncation_hits"] = r.truncation_hits;
          row["max_R"] = r.max_R;
          out.append(row);
        }
        return out;
      },
      py::arg("polynomial"), py::arg("d"), py::arg("n"), py::arg("alpha"), py::arg("cutoffs"),
      py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("L") = 50.0, py::arg("threads") = 1);
}
