// Command-line front end: generate, measure, test, evaluate, bench, report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "causnet/bench.hpp"
#include "causnet/evaluation.hpp"
#include "causnet/io.hpp"
#include "causnet/measure_spec.hpp"
#include "causnet/significance.hpp"

namespace fs = std::filesystem;
using namespace causnet;

namespace {

struct GenerateArgs {
  std::string system = "henon";
  int k = 5;
  Index n = 512;
  double coupling = 0.2;
  std::optional<double> parameter;
  int order = 3;
  std::uint64_t seed = 1;
  std::string out = "data.txt";
  std::string truth = "truth.txt";
};

struct MeasureArgs {
  std::string input, measure = "GCI(p=5)", out = "matrix.txt";
  bool raw = false;
};

struct TestArgs {
  std::string matrix, criterion = "significance", out = "network.txt";
  double alpha = 0.05, threshold = 0.0;
  int rho = 0;
  std::string data, measure, p_out;
  int surrogates = kDefaultSurrogates;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct EvaluateArgs {
  std::string truth, estimate;
};

struct BenchArgs {
  std::string config, output;
  int workers = 0;
};

struct ReportArgs {
  std::string results, out;
  std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& a) {
  Scenario s;
  s.system = parse_system(a.system);
  s.k = a.k;
  s.n = a.n;
  s.coupling = a.coupling;
  s.var_order = a.order;
  if (s.system == SystemId::MackeyGlass) s.parameter = a.parameter.value_or(MackeyGlassOptions{}.delay);
  if (s.system == SystemId::NeuralMass) s.parameter = a.parameter.value_or(NeuralMassParams{}.A);
  const auto r = generate(s, a.seed);
  io::write_time_series(fs::path(a.out), r.data);
  io::write_adjacency(fs::path(a.truth), r.graph);
  std::cout << "wrote " << r.data.n() << " x " << r.data.k() << " samples to " << a.out << ", " << r.graph.edge_count()
            << " true edges to " << a.truth << '\n';
  return 0;
}

int run_measure(const MeasureArgs& a) {
  auto ts = io::read_time_series(fs::path(a.input));
  if (!a.raw) ts = standardize(ts);
  const auto spec = MeasureSpec::parse(a.measure);
  const auto r = compute_matrix(spec, ts);
  io::write_matrix(fs::path(a.out), r.values);
  std::cout << spec.id() << " -> " << a.out << '\n';
  return 0;
}

int run_test(const TestArgs& a) {
  CausalityMatrix r{io::read_matrix(fs::path(a.matrix)), a.measure};
  AdjacencyNetwork net;
  if (a.criterion == "significance") {
    if (a.data.empty() || a.measure.empty())
      throw Error(ErrorCode::ConfigError, "significance needs --data and --measure to build surrogates");
    const auto spec = MeasureSpec::parse(a.measure);
    const auto ts = standardize(io::read_time_series(fs::path(a.data)));
    if (spec.is_pmime()) {
      net = binarize_pmime(r);
    } else {
      auto row = [&spec](const TimeSeriesSet& d, Index i) { return compute_driver_row(spec, d, i); };
      const auto sig = surrogate_p_values(row, ts, a.surrogates, a.seed, a.workers);
      if (!a.p_out.empty()) io::write_matrix(fs::path(a.p_out), sig.p_values);
      net = binarize_significance(sig.p_values, a.alpha);
    }
  } else if (a.criterion == "density") {
    if (a.rho < 1) throw Error(ErrorCode::ConfigError, "density needs --rho >= 1");
    net = binarize_density(r, a.rho);
  } else if (a.criterion == "magnitude") {
    net = binarize_magnitude(r, a.threshold);
  } else if (a.criterion == "pmime") {
    net = binarize_pmime(r);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown criterion '" + a.criterion + "'");
  }
  io::write_adjacency(fs::path(a.out), net);
  std::cout << net.edge_count() << " edges -> " << a.out << '\n';
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const auto truth = io::read_adjacency(fs::path(a.truth));
  const auto est = io::read_adjacency(fs::path(a.estimate));
  const auto c = confusion(truth, est);
  const auto r = indices(c);
  std::printf("TP=%d FP=%d FN=%d TN=%d\n", c.tp, c.fp, c.fn, c.tn);
  std::printf("sens=%.4f spec=%.4f prec=%.4f MCC=%.4f FM=%.4f HD=%d\n", r.sens, r.spec, r.prec, r.mcc, r.fm, r.hd);
  return 0;
}

int run_bench(const BenchArgs& a) {
  auto cfg = ExperimentConfig::load(a.config);
  if (a.workers > 0) cfg.workers = a.workers;
  if (!a.output.empty()) cfg.output = a.output;
  const auto rows = run_experiment(cfg);
  fs::create_directories(cfg.output);
  write_results(cfg.output / "results.csv", rows);
  std::ofstream report(cfg.output / "report.txt");
  report_rankings(report, rows, cfg.master_seed);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.ok();
  std::cout << rows.size() << " rows (" << failed << " failed) -> " << (cfg.output / "results.csv").string() << '\n';
  return 0;
}

int run_report(const ReportArgs& a) {
  const auto rows = read_results(fs::path(a.results));
  if (a.out.empty()) {
    report_rankings(std::cout, rows, a.seed);
  } else {
    std::ofstream out(a.out);
    report_rankings(out, rows, a.seed);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality measures and network reconstruction benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Simulate a system and write data plus its true network");
  g->add_option("--system", gen.system, "henon|mackey-glass|neural-mass|var (or S1..S4)")->capture_default_str();
  g->add_option("-K,--K", gen.k, "Number of variables")->capture_default_str();
  g->add_option("-n,--n", gen.n, "Samples")->capture_default_str();
  g->add_option("-C,--C", gen.coupling, "Coupling strength")->capture_default_str();
  g->add_option("--parameter", gen.parameter, "Delta for mackey-glass (100), A for neural-mass (3.45)");
  g->add_option("--order", gen.order, "Sparse VAR order")->capture_default_str();
  g->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  g->add_option("-o,--out", gen.out, "Data file")->capture_default_str();
  g->add_option("--truth", gen.truth, "Adjacency file of the true network")->capture_default_str();

  MeasureArgs mea;
  auto* m = app.add_subcommand("measure", "Compute a causality matrix from a data file");
  m->add_option("-i,--input", mea.input, "Data file, one row per time point")->required();
  m->add_option("-m,--measure", mea.measure, "Measure, e.g. TE(m=2,tau=1) or RGPDC(p=3,band=alpha)")->capture_default_str();
  m->add_option("-o,--out", mea.out, "Matrix file")->capture_default_str();
  m->add_flag("--raw", mea.raw, "Skip standardization of the channels");

  TestArgs tst;
  auto* t = app.add_subcommand("test", "Binarize a causality matrix into an adjacency network");
  t->add_option("-x,--matrix", tst.matrix, "Causality matrix file")->required();
  t->add_option("-c,--criterion", tst.criterion, "significance|density|magnitude|pmime")->capture_default_str();
  t->add_option("--alpha", tst.alpha, "Significance level")->capture_default_str();
  t->add_option("--rho", tst.rho, "Number of edges for the density criterion");
  t->add_option("--threshold", tst.threshold, "Magnitude threshold")->capture_default_str();
  t->add_option("--data", tst.data, "Data file (significance only)");
  t->add_option("-m,--measure", tst.measure, "Measure that produced the matrix (significance only)");
  t->add_option("-M,--surrogates", tst.surrogates, "Surrogates per driver")->capture_default_str();
  t->add_option("--seed", tst.seed, "Surrogate seed")->capture_default_str();
  t->add_option("--workers", tst.workers, "Threads")->capture_default_str();
  t->add_option("--p-values", tst.p_out, "Also write the p-value matrix here");
  t->add_option("-o,--out", tst.out, "Adjacency file")->capture_default_str();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Compare an estimated network with the true one");
  e->add_option("truth", ev.truth, "True adjacency file")->required();
  e->add_option("estimate", ev.estimate, "Estimated adjacency file")->required();

  BenchArgs ben;
  auto* b = app.add_subcommand("bench", "Run a full sweep from a config file");
  b->add_option("config", ben.config, "Config file")->required();
  b->add_option("--workers", ben.workers, "Override the worker count");
  b->add_option("-o,--output", ben.output, "Override the output directory");
  b->footer(config_help());

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Rankings and scores from a result table");
  r->add_option("results", rep.results, "results.csv written by bench")->required();
  r->add_option("--seed", rep.seed, "Seed for breaking MCC ties")->capture_default_str();
  r->add_option("-o,--out", rep.out, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return run_generate(gen);
    if (*m) return run_measure(mea);
    if (*t) return run_test(tst);
    if (*e) return run_evaluate(ev);
    if (*b) return run_bench(ben);
    if (*r) return run_report(rep);
  } catch (const Error& err) {
    std::cerr << "error [" << to_string(err.code()) << "]: " << err.what() << '\n';
    return err.code() == ErrorCode::ConfigError || err.code() == ErrorCode::ParseError ? 2 : 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
