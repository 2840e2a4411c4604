#include "causnet/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "causnet/parallel.hpp"
#include "causnet/significance.hpp"

namespace causnet {
namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string fmt(double v, const char* spec = "%.10g") {
  if (std::isnan(v)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

template <class T>
std::vector<T> as_list(const json& j, const char* key) {
  try {
    if (j.is_array()) return j.get<std::vector<T>>();
    return {j.get<T>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad value for '") + key + "': " + e.what());
  }
}

SystemSweep parse_sweep(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "each system must be an object");
  static const char* known[] = {"name", "system", "K", "n", "C", "delay", "A", "order"};
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; }))
      throw Error(ErrorCode::ConfigError, "unknown system key '" + key + "'");
  }
  SystemSweep s;
  const char* name_key = j.contains("name") ? "name" : "system";
  if (!j.contains(name_key)) throw Error(ErrorCode::ConfigError, "system block needs a 'name'");
  s.system = parse_system(j.at(name_key).get<std::string>());
  if (j.contains("K")) s.k = as_list<int>(j.at("K"), "K");
  if (j.contains("n")) s.n = as_list<Index>(j.at("n"), "n");
  if (j.contains("C")) s.couplings = as_list<double>(j.at("C"), "C");
  if (j.contains("delay")) s.parameter = as_list<double>(j.at("delay"), "delay");
  if (j.contains("A")) s.parameter = as_list<double>(j.at("A"), "A");
  read_if(j, "order", s.var_order);
  return s;
}

// --- CSV -------------------------------------------------------------------

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_real(const std::string& s) {
  if (s.empty()) return kNaN;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  }
}

const char* kColumns[] = {"system", "K", "n", "parameter", "C", "measure", "criterion", "criterion_param", "realization",
                          "TP", "FP", "FN", "TN", "sens", "spec", "prec", "MCC", "FM", "HD", "error"};

// --- sweep -----------------------------------------------------------------

struct Cell {
  std::optional<CausalityMatrix> matrix;
  Matrix p_values;
  std::string error;
};

int clamp_rho(double multiple, int rho0, Index k) {
  const auto rho = static_cast<int>(std::lround(multiple * rho0));
  return std::clamp(rho, 1, static_cast<int>(k * (k - 1)));
}

std::string block_name(const std::string& criterion, double param) {
  const char* key = criterion == "significance" ? "alpha" : "x rho0";
  return criterion + "(" + (criterion == "significance" ? std::string(key) + "=" + fmt(param, "%g") : fmt(param, "%g") + key) + ")";
}

}  // namespace

std::string_view to_string(SystemId id) {
  switch (id) {
    case SystemId::Henon: return "henon";
    case SystemId::MackeyGlass: return "mackey-glass";
    case SystemId::NeuralMass: return "neural-mass";
    case SystemId::SparseVar: return "var";
  }
  return "?";
}

SystemId parse_system(std::string_view text) {
  const std::string s = lower(text);
  if (s == "henon" || s == "s1") return SystemId::Henon;
  if (s == "mackey-glass" || s == "mackeyglass" || s == "s2") return SystemId::MackeyGlass;
  if (s == "neural-mass" || s == "neuralmass" || s == "s3") return SystemId::NeuralMass;
  if (s == "var" || s == "sparse-var" || s == "s4") return SystemId::SparseVar;
  throw Error(ErrorCode::ConfigError, "unknown system '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (systems.empty()) throw Error(ErrorCode::ConfigError, "no systems configured");
  if (measures.empty()) throw Error(ErrorCode::ConfigError, "no measures configured");
  if (criteria.alphas.empty() && criteria.density_multiples.empty() && criteria.magnitude_multiples.empty())
    throw Error(ErrorCode::ConfigError, "no criteria configured");
  if (realizations < 1) throw Error(ErrorCode::ConfigError, "realizations must be >= 1");
  if (workers < 1) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
  for (double a : criteria.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::ConfigError, "alpha must lie in (0, 1)");
  }
  if (!criteria.alphas.empty() && criteria.surrogates < 19)
    throw Error(ErrorCode::ConfigError, "at least 19 surrogates are needed");
  for (double m : criteria.density_multiples) {
    if (!(m > 0.0)) throw Error(ErrorCode::ConfigError, "density multiples must be positive");
  }
  for (double m : criteria.magnitude_multiples) {
    if (!(m > 0.0)) throw Error(ErrorCode::ConfigError, "magnitude multiples must be positive");
  }
  for (const auto& s : systems) {
    if (s.k.empty() || s.n.empty()) throw Error(ErrorCode::ConfigError, "system needs K and n");
    for (int k : s.k) {
      if (k < 3) throw Error(ErrorCode::ConfigError, "K must be >= 3");
    }
    for (Index n : s.n) {
      if (n < 100) throw Error(ErrorCode::ConfigError, "n must be >= 100");
    }
    if (s.system != SystemId::SparseVar && s.couplings.empty())
      throw Error(ErrorCode::ConfigError, "system needs at least one coupling strength");
    for (double c : s.couplings) {
      if (!(c >= 0.0)) throw Error(ErrorCode::ConfigError, "coupling strengths must be >= 0");
    }
    if (s.system == SystemId::SparseVar && s.var_order < 1) throw Error(ErrorCode::ConfigError, "VAR order must be >= 1");
  }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be an object");
  ExperimentConfig cfg;
  if (j.contains("systems")) {
    for (const auto& s : j.at("systems")) cfg.systems.push_back(parse_sweep(s));
  }
  if (j.contains("system")) cfg.systems.push_back(parse_sweep(j.at("system")));
  if (j.contains("measures")) {
    for (const auto& m : as_list<std::string>(j.at("measures"), "measures")) {
      try {
        cfg.measures.push_back(MeasureSpec::parse(m));
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
      }
    }
  }
  if (j.contains("criteria")) {
    const auto& c = j.at("criteria");
    if (c.contains("significance")) {
      const auto& s = c.at("significance");
      if (s.is_object()) {
        if (s.contains("alpha")) cfg.criteria.alphas = as_list<double>(s.at("alpha"), "alpha");
        read_if(s, "M", cfg.criteria.surrogates);
      } else {
        cfg.criteria.alphas = as_list<double>(s, "significance");
      }
    }
    if (c.contains("density")) cfg.criteria.density_multiples = as_list<double>(c.at("density"), "density");
    if (c.contains("magnitude")) cfg.criteria.magnitude_multiples = as_list<double>(c.at("magnitude"), "magnitude");
  }
  read_if(j, "realizations", cfg.realizations);
  read_if(j, "master_seed", cfg.master_seed);
  read_if(j, "workers", cfg.workers);
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string config_help() {
  return R"HELP(Config file (JSON, comments allowed):
  {
    "systems": [                      one block per system, or a single "system": {...}
      { "name": "henon",              henon|S1, mackey-glass|S2, neural-mass|S3, var|S4
        "K": [5, 25],                 scalar or list (default 5)
        "n": [512, 2048],             scalar or list (default 512)
        "C": [0, 0.1, 0.2],           coupling strengths (default [0.2]; ignored for var)
        "delay": [100, 300],          Mackey-Glass Delta (default 100)
        "A": [3.45, 3.7],             neural-mass gain (default 3.45)
        "order": 3 }                  sparse VAR order (default 3)
    ],
    "measures": ["TE(m=2,tau=1)", "PMIME(L=5)", "RGPDC(p=3,band=alpha)"],
    "criteria": {
      "significance": { "alpha": [0.01, 0.05], "M": 100 },   M default 100
      "density": [0.5, 1, 2],         multiples of the true edge count
      "magnitude": [1]                threshold = mean rho-th largest value over realizations
    },
    "realizations": 10,               default 10; realization r uses seed master_seed ^ r
    "master_seed": 1,                 default 1
    "workers": 1,                     default 1
    "output": "bench_out"             directory for results.csv and report.txt
  }
PMIME is binarized by its positive entries under the significance criterion.
)HELP";
}

std::string Scenario::cell() const {
  std::string s = std::string(to_string(system)) + " K=" + std::to_string(k) + " n=" + std::to_string(n);
  if (system == SystemId::MackeyGlass) s += " Delta=" + fmt(parameter, "%g");
  if (system == SystemId::NeuralMass) s += " A=" + fmt(parameter, "%g");
  if (system == SystemId::SparseVar) s += " P=" + std::to_string(var_order);
  return s;
}

std::string Scenario::label() const {
  return std::isnan(coupling) ? cell() : cell() + " C=" + fmt(coupling, "%g");
}

std::vector<Scenario> expand_scenarios(const ExperimentConfig& cfg) {
  std::vector<Scenario> out;
  for (const auto& sw : cfg.systems) {
    std::vector<double> params = sw.parameter;
    if (params.empty()) {
      if (sw.system == SystemId::MackeyGlass) params = {MackeyGlassOptions{}.delay};
      else if (sw.system == SystemId::NeuralMass) params = {NeuralMassParams{}.A};
      else params = {kNaN};
    }
    const std::vector<double> couplings = sw.system == SystemId::SparseVar ? std::vector<double>{kNaN} : sw.couplings;
    for (int k : sw.k)
      for (Index n : sw.n)
        for (double p : params)
          for (double c : couplings) out.push_back({sw.system, k, n, c, p, sw.var_order});
  }
  return out;
}

namespace {

SystemRealization generate_raw(const Scenario& s, std::uint64_t seed) {
  switch (s.system) {
    case SystemId::Henon: return gen_henon(s.k, s.coupling, s.n, seed);
    case SystemId::MackeyGlass: return gen_mackey_glass(s.k, s.coupling, s.parameter, s.n, seed);
    case SystemId::NeuralMass: {
      NeuralMassParams p;
      p.A = s.parameter;
      return gen_neural_mass(s.k, s.coupling, p, s.n, seed);
    }
    case SystemId::SparseVar: break;
  }
  SparseVarSpec spec;
  spec.k = s.k;
  spec.order = s.var_order;
  spec.n = s.n;
  spec.seed = seed;
  auto v = gen_sparse_var(spec);
  return {std::move(v.data), std::move(v.graph)};
}

}  // namespace

SystemRealization generate(const Scenario& s, std::uint64_t seed) {
  auto r = generate_raw(s, seed);
  r.data = standardize(r.data);
  return r;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto scenarios = expand_scenarios(cfg);
  const std::size_t ns = scenarios.size(), nr = static_cast<std::size_t>(cfg.realizations), nm = cfg.measures.size();
  auto data_seed = [&](std::size_t r) { return cfg.master_seed ^ static_cast<std::uint64_t>(r); };

  std::vector<std::optional<SystemRealization>> data(ns * nr);
  std::vector<std::string> data_error(ns * nr);
  parallel_for(ns * nr, cfg.workers, [&](std::size_t t) {
    try {
      data[t] = generate(scenarios[t / nr], data_seed(t % nr));
    } catch (const Error& e) {
      data_error[t] = std::string(to_string(e.code()));
    }
  });

  // Cells are (scenario, realization, measure); the surrogate loop inside a
  // cell only gets extra threads when there are fewer cells than workers.
  const std::size_t cells = ns * nr * nm;
  const int inner = cells < static_cast<std::size_t>(cfg.workers) ? cfg.workers : 1;
  const bool want_p = !cfg.criteria.alphas.empty();
  std::vector<Cell> result(cells);
  parallel_for(cells, cfg.workers, [&](std::size_t t) {
    const std::size_t sr = t / nm, m = t % nm;
    Cell& cell = result[t];
    if (!data[sr]) {
      cell.error = data_error[sr];
      return;
    }
    const auto& spec = cfg.measures[m];
    const auto& ts = data[sr]->data;
    try {
      if (want_p && !spec.is_pmime()) {
        auto row = [&spec](const TimeSeriesSet& d, Index i) { return compute_driver_row(spec, d, i); };
        auto sig = surrogate_p_values(row, ts, cfg.criteria.surrogates,
                                      derive_seed(data_seed(sr % nr), {fnv1a(spec.id())}), inner);
        CausalityMatrix r{std::move(sig.original), spec.id()};
        cell.matrix = std::move(r);
        cell.p_values = std::move(sig.p_values);
      } else {
        cell.matrix = compute_matrix(spec, ts);
      }
    } catch (const Error& e) {
      cell.error = std::string(to_string(e.code()));
    }
  });

  auto cell_at = [&](std::size_t s, std::size_t r, std::size_t m) -> const Cell& { return result[(s * nr + r) * nm + m]; };

  std::vector<ResultRow> rows;
  for (std::size_t s = 0; s < ns; ++s) {
    const Scenario& sc = scenarios[s];
    int rho0 = 0;
    for (std::size_t r = 0; r < nr && rho0 == 0; ++r) {
      if (data[s * nr + r]) rho0 = data[s * nr + r]->graph.edge_count();
    }
    for (std::size_t m = 0; m < nm; ++m) {
      const auto& spec = cfg.measures[m];
      auto emit = [&](const std::string& criterion, double param, std::size_t r, const auto& binarize) {
        ResultRow row{sc, spec.id(), criterion, param, static_cast<int>(r), {}, {}, {}};
        const Cell& c = cell_at(s, r, m);
        if (!c.error.empty()) {
          row.error = c.error;
        } else {
          try {
            const auto est = binarize(c, data[s * nr + r]->graph);
            row.counts = confusion(data[s * nr + r]->graph, est);
            row.report = indices(row.counts);
          } catch (const Error& e) {
            row.error = std::string(to_string(e.code()));
          }
        }
        rows.push_back(std::move(row));
      };
      for (double alpha : cfg.criteria.alphas) {
        for (std::size_t r = 0; r < nr; ++r) {
          emit("significance", alpha, r, [&](const Cell& c, const CouplingGraph&) {
            return spec.is_pmime() ? binarize_pmime(*c.matrix) : binarize_significance(c.p_values, alpha);
          });
        }
      }
      for (double mult : cfg.criteria.density_multiples) {
        for (std::size_t r = 0; r < nr; ++r) {
          emit("density", mult, r, [&](const Cell& c, const CouplingGraph& truth) {
            return binarize_density(*c.matrix, clamp_rho(mult, truth.edge_count(), sc.k));
          });
        }
      }
      for (double mult : cfg.criteria.magnitude_multiples) {
        std::vector<CausalityMatrix> ok;
        for (std::size_t r = 0; r < nr; ++r) {
          if (cell_at(s, r, m).matrix) ok.push_back(*cell_at(s, r, m).matrix);
        }
        const double th = ok.empty() || rho0 == 0 ? kNaN : threshold_from_density(ok, clamp_rho(mult, rho0, sc.k));
        for (std::size_t r = 0; r < nr; ++r) {
          emit("magnitude", mult, r, [&](const Cell& c, const CouplingGraph&) { return binarize_magnitude(*c.matrix, th); });
        }
      }
    }
  }
  return rows;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  for (std::size_t c = 0; c < std::size(kColumns); ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& r : rows) {
    const auto& s = r.scenario;
    out << to_string(s.system) << ',' << s.k << ',' << s.n << ',' << fmt(s.parameter) << ',' << fmt(s.coupling) << ','
        << csv_field(r.measure) << ',' << r.criterion << ',' << fmt(r.criterion_param) << ',' << r.realization << ',';
    if (r.ok()) {
      out << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ',' << fmt(r.report.sens, "%.6f")
          << ',' << fmt(r.report.spec, "%.6f") << ',' << fmt(r.report.prec, "%.6f") << ',' << fmt(r.report.mcc, "%.6f") << ','
          << fmt(r.report.fm, "%.6f") << ',' << r.report.hd << ',';
    } else {
      out << ",,,,,,,,,,";
    }
    out << csv_field(r.error) << '\n';
  }
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  write_results(out, rows);
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty result table");
  const auto header = csv_split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
  for (const char* name : kColumns) {
    if (!col.count(name)) throw Error(ErrorCode::ParseError, std::string("result table lacks column ") + name);
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv_split(line);
    if (f.size() != header.size()) throw Error(ErrorCode::ParseError, "ragged row in result table");
    auto get = [&](const char* name) -> const std::string& { return f[col[name]]; };
    auto get_int = [&](const char* name) { return get(name).empty() ? 0 : static_cast<int>(parse_real(get(name))); };
    ResultRow r;
    r.scenario.system = parse_system(get("system"));
    r.scenario.k = get_int("K");
    r.scenario.n = get_int("n");
    r.scenario.parameter = parse_real(get("parameter"));
    r.scenario.coupling = parse_real(get("C"));
    r.measure = get("measure");
    r.criterion = get("criterion");
    r.criterion_param = parse_real(get("criterion_param"));
    r.realization = get_int("realization");
    r.error = get("error");
    if (r.ok()) {
      r.counts = {get_int("TP"), get_int("FP"), get_int("FN"), get_int("TN")};
      r.report = indices(r.counts);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return read_results(in);
}

std::vector<MeasureSummary> summarize(const std::vector<ResultRow>& rows, std::uint64_t seed) {
  std::vector<MeasureSummary> out;
  std::map<std::string, std::size_t> at;
  for (const auto& r : rows) {
    auto [it, fresh] = at.try_emplace(r.measure, out.size());
    if (fresh) out.push_back({r.measure});
    auto& s = out[it->second];
    if (!r.ok()) {
      ++s.failures;
      continue;
    }
    ++s.realizations;
    s.sens += r.report.sens;
    s.spec += r.report.spec;
    s.prec += r.report.prec;
    s.mcc += r.report.mcc;
    s.fm += r.report.fm;
    s.hd += r.report.hd;
  }
  std::vector<double> mcc;
  for (auto& s : out) {
    if (s.realizations > 0) {
      const double n = s.realizations;
      s.sens /= n, s.spec /= n, s.prec /= n, s.mcc /= n, s.fm /= n, s.hd /= n;
    } else {
      s.hd = kNaN;
    }
    mcc.push_back(s.mcc);
  }
  const auto ranks = rank_measures(mcc, seed);
  for (std::size_t m = 0; m < out.size(); ++m) out[m].rank = ranks[m];
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return out;
}

void report_rankings(std::ostream& out, const std::vector<ResultRow>& rows, std::uint64_t seed) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty result table");
  std::vector<std::string> measures;  // first-appearance order
  std::vector<std::pair<std::string, double>> blocks;
  for (const auto& r : rows) {
    if (std::find(measures.begin(), measures.end(), r.measure) == measures.end()) measures.push_back(r.measure);
    const std::pair<std::string, double> b{r.criterion, r.criterion_param};
    if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) blocks.push_back(b);
  }
  char line[256];
  for (const auto& [criterion, param] : blocks) {
    const std::string block = block_name(criterion, param);
    out << "=== " << block << " ===\n\n";
    // scenario label -> rows, in first-appearance order
    std::vector<std::string> order;
    std::map<std::string, std::vector<ResultRow>> by_scenario;
    std::map<std::string, Scenario> scenario_of;
    for (const auto& r : rows) {
      if (r.criterion != criterion || r.criterion_param != param) continue;
      const auto label = r.scenario.label();
      if (!by_scenario.count(label)) order.push_back(label), scenario_of[label] = r.scenario;
      by_scenario[label].push_back(r);
    }
    // cell -> per-strength ranks indexed like `measures`
    std::vector<std::string> cells;
    std::map<std::string, std::vector<std::vector<int>>> cell_ranks;
    for (const auto& label : order) {
      const auto summary = summarize(by_scenario[label], derive_seed(seed, {fnv1a(label), fnv1a(block)}));
      out << label << '\n';
      std::snprintf(line, sizeof line, "  %4s  %-32s %7s %7s %7s %7s %7s %7s\n", "rank", "measure", "MCC", "sens", "spec",
                    "prec", "FM", "HD");
      out << line;
      std::vector<int> ranks(measures.size(), 0);
      for (const auto& s : summary) {
        std::snprintf(line, sizeof line, "  %4d  %-32s %7.3f %7.3f %7.3f %7.3f %7.3f %7.2f", s.rank, s.measure.c_str(), s.mcc,
                      s.sens, s.spec, s.prec, s.fm, s.hd);
        out << line;
        if (s.failures > 0) out << "  (" << s.failures << " failed)";
        out << '\n';
        ranks[std::find(measures.begin(), measures.end(), s.measure) - measures.begin()] = s.rank;
      }
      out << '\n';
      if (summary.size() != measures.size()) continue;  // a measure missing here cannot be scored
      const auto cell = scenario_of[label].cell();
      if (!cell_ranks.count(cell)) cells.push_back(cell);
      cell_ranks[cell].push_back(std::move(ranks));
    }

    std::vector<ScoreTable> tables;
    for (const auto& cell : cells) {
      tables.push_back(score(cell_ranks[cell], measures));
      const auto& t = tables.back();
      out << "score " << cell << " (" << cell_ranks[cell].size() << " coupling strengths)\n";
      std::vector<std::size_t> idx(measures.size());
      for (std::size_t m = 0; m < idx.size(); ++m) idx[m] = m;
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return t.score[a] > t.score[b]; });
      for (auto m : idx) {
        std::snprintf(line, sizeof line, "  %-32s P=%6.2f  s=%.3f\n", measures[m].c_str(), t.mean_rank[m], t.score[m]);
        out << line;
      }
      out << '\n';
    }
    if (tables.empty()) continue;
    const auto overall = overall_scores(tables);
    // Keep the best parameterization of each family.
    std::vector<std::pair<std::string, std::size_t>> best;
    for (std::size_t m = 0; m < measures.size(); ++m) {
      const auto family = measures[m].substr(0, measures[m].find('('));
      auto it = std::find_if(best.begin(), best.end(), [&](const auto& b) { return b.first == family; });
      if (it == best.end()) best.emplace_back(family, m);
      else if (overall[m] > overall[it->second]) it->second = m;
    }
    std::stable_sort(best.begin(), best.end(), [&](const auto& a, const auto& b) { return overall[a.second] > overall[b.second]; });
    out << "overall score over " << tables.size() << " system cells\n";
    for (const auto& [family, m] : best) {
      std::snprintf(line, sizeof line, "  %-32s s=%.3f\n", measures[m].c_str(), overall[m]);
      out << line;
    }
    out << '\n';
  }
}

}  // namespace causnet
