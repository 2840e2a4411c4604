#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "causnet/bench.hpp"
#include "causnet/evaluation.hpp"
#include "causnet/measure_spec.hpp"
#include "causnet/significance.hpp"
#include "causnet/systems.hpp"

namespace py = pybind11;
using namespace causnet;

namespace {

py::tuple realization(const SystemRealization& r) {
  return py::make_tuple(r.data.data(), r.graph.adjacency());
}

AdjacencyNetwork network(const IntMatrix& adj) { return AdjacencyNetwork(adj); }

TimeSeriesSet prepared(const Matrix& data, bool standardized) {
  TimeSeriesSet ts(data);
  return standardized ? standardize(ts) : ts;
}

}  // namespace

PYBIND11_MODULE(_causnet, m) {
  m.doc() = "Causality measures, synthetic systems and network reconstruction benchmarks";

  py::register_exception<Error>(m, "CausnetError");

  m.def("henon", [](int k, double c, Index n, std::uint64_t seed) { return realization(gen_henon(k, c, n, seed)); },
        py::arg("k"), py::arg("c"), py::arg("n"), py::arg("seed") = 1,
        "Coupled Henon maps; returns (data n x K, true adjacency).");
  m.def("mackey_glass",
        [](int k, double c, double delay, Index n, std::uint64_t seed) {
          return realization(gen_mackey_glass(k, c, delay, n, seed));
        },
        py::arg("k"), py::arg("c"), py::arg("delay") = 100.0, py::arg("n") = 4096, py::arg("seed") = 1);
  m.def("neural_mass",
        [](int k, double c, double a, Index n, std::uint64_t seed) {
          NeuralMassParams p;
          p.A = a;
          return realization(gen_neural_mass(k, c, p, n, seed));
        },
        py::arg("k"), py::arg("c"), py::arg("A") = 3.45, py::arg("n") = 4096, py::arg("seed") = 1);
  m.def("sparse_var",
        [](int k, int order, Index n, std::uint64_t seed) {
          SparseVarSpec spec;
          spec.k = k;
          spec.order = order;
          spec.n = n;
          spec.seed = seed;
          auto s = gen_sparse_var(spec);
          return py::make_tuple(s.data.data(), s.graph.adjacency(), s.model.coefficients);
        },
        py::arg("k") = 25, py::arg("order") = 3, py::arg("n") = 512, py::arg("seed") = 1,
        "Sparse stationary VAR; returns (data, true adjacency, [A_1 .. A_P]).");

  m.def("measure_id", [](const std::string& spec) { return MeasureSpec::parse(spec).id(); }, py::arg("spec"));
  m.def("causality_matrix",
        [](const std::string& spec, const Matrix& data, bool standardized) {
          py::gil_scoped_release release;
          return compute_matrix(MeasureSpec::parse(spec), prepared(data, standardized)).values;
        },
        py::arg("measure"), py::arg("data"), py::arg("standardize") = true,
        "K x K matrix, entry (i, j) the strength of i -> j, NaN diagonal.");
  m.def("p_values",
        [](const std::string& spec, const Matrix& data, int surrogates, std::uint64_t seed, bool standardized, int workers) {
          const auto s = MeasureSpec::parse(spec);
          const auto ts = prepared(data, standardized);
          py::gil_scoped_release release;
          auto row = [&s](const TimeSeriesSet& d, Index i) { return compute_driver_row(s, d, i); };
          auto sig = surrogate_p_values(row, ts, surrogates, seed, workers);
          return std::make_pair(sig.original, sig.p_values);
        },
        py::arg("measure"), py::arg("data"), py::arg("surrogates") = kDefaultSurrogates, py::arg("seed") = 1,
        py::arg("standardize") = true, py::arg("workers") = 1,
        "Time-shifted surrogate test; returns (original matrix, p-values).");
  m.def("randomization_p_value", &randomization_p_value, py::arg("rank"), py::arg("surrogates"));

  m.def("binarize_significance",
        [](const Matrix& p, double alpha) { return binarize_significance(p, alpha).adjacency(); }, py::arg("p_values"),
        py::arg("alpha"));
  m.def("binarize_density",
        [](const Matrix& r, int rho) { return binarize_density(CausalityMatrix{r, {}}, rho).adjacency(); },
        py::arg("matrix"), py::arg("rho"));
  m.def("binarize_magnitude",
        [](const Matrix& r, double th) { return binarize_magnitude(CausalityMatrix{r, {}}, th).adjacency(); },
        py::arg("matrix"), py::arg("threshold"));
  m.def("binarize_pmime", [](const Matrix& r) { return binarize_pmime(CausalityMatrix{r, {}}).adjacency(); },
        py::arg("matrix"));

  m.def("evaluate",
        [](const IntMatrix& truth, const IntMatrix& estimate) {
          const auto c = confusion(network(truth), network(estimate));
          const auto r = indices(c);
          py::dict d;
          d["TP"] = c.tp, d["FP"] = c.fp, d["FN"] = c.fn, d["TN"] = c.tn;
          d["sens"] = r.sens, d["spec"] = r.spec, d["prec"] = r.prec, d["MCC"] = r.mcc, d["FM"] = r.fm, d["HD"] = r.hd;
          return d;
        },
        py::arg("truth"), py::arg("estimate"), "Confusion counts and performance indices.");
  m.def("indices",
        [](int tp, int fp, int fn, int tn) {
          const auto r = indices({tp, fp, fn, tn});
          return py::make_tuple(r.sens, r.spec, r.prec, r.mcc, r.fm, r.hd);
        },
        py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"), "(sens, spec, prec, MCC, FM, HD)");
  m.def("rank_measures", &rank_measures, py::arg("mcc"), py::arg("seed") = 0);

  m.def("run_bench",
        [](const std::string& config_json) {
          const auto cfg = ExperimentConfig::from_json(config_json);
          std::vector<ResultRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_experiment(cfg);
          }
          std::ostringstream table, report;
          write_results(table, rows);
          report_rankings(report, rows, cfg.master_seed);
          return py::make_tuple(table.str(), report.str());
        },
        py::arg("config_json"), "Runs a sweep; returns (CSV result table, ranking report).");
}
