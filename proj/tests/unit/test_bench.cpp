#include <doctest.h>

#include <sstream>

#include "causnet/bench.hpp"

using namespace causnet;

namespace {

constexpr const char* kSmallConfig = R"J({
  // two strengths of a three-node chain, two cheap measures
  "system": { "name": "henon", "K": 3, "n": 300, "C": [0.1, 0.3] },
  "measures": ["GCI(p=2)", "CGCI(p=2)"],
  "criteria": { "significance": { "alpha": [0.05], "M": 19 }, "density": [1], "magnitude": [1] },
  "realizations": 3,
  "master_seed": 4
})J";

ResultRow synthetic_row(const std::string& measure, double coupling, int realization, double mcc_like) {
  ResultRow r;
  r.scenario.system = SystemId::Henon;
  r.scenario.k = 5;
  r.scenario.n = 512;
  r.scenario.coupling = coupling;
  r.scenario.parameter = std::numeric_limits<double>::quiet_NaN();
  r.measure = measure;
  r.criterion = "density";
  r.criterion_param = 6;
  r.realization = realization;
  // mcc_like in {0, 1, 2}: number of swapped edges
  const int swaps = static_cast<int>(mcc_like);
  r.counts = {6 - swaps, swaps, swaps, 14 - swaps};
  r.report = indices(r.counts);
  return r;
}

int count_lines_with(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto cfg = ExperimentConfig::from_json(kSmallConfig);
  REQUIRE(cfg.systems.size() == 1);
  CHECK(cfg.systems[0].k == std::vector<int>{3});
  CHECK(cfg.systems[0].couplings.size() == 2);
  CHECK(cfg.measures.size() == 2);
  CHECK(cfg.criteria.surrogates == 19);
  CHECK(cfg.realizations == 3);
  CHECK(cfg.master_seed == 4);
  CHECK(expand_scenarios(cfg).size() == 2);

  CHECK(parse_system("S2") == SystemId::MackeyGlass);
  CHECK(parse_system("neural-mass") == SystemId::NeuralMass);
  CHECK_THROWS_AS(parse_system("lorenz"), Error);

  auto code_of = [](const char* text) {
    try {
      ExperimentConfig::from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of("{") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"measures": ["GCI"], "criteria": {"density": [1]}})J") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"system": {"name": "henon"}, "measures": ["NOPE"], "criteria": {"density": [1]}})J") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"system": {"name": "henon"}, "measures": ["GCI"], "criteria": {"significance": [1.5]}})J") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"system": {"name": "henon", "K": 2}, "measures": ["GCI"], "criteria": {"density": [1]}})J") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"system": {"name": "henon", "colour": 1}, "measures": ["GCI"], "criteria": {"density": [1]}})J") == ErrorCode::ConfigError);
  CHECK(code_of(R"J({"system": {"name": "henon"}, "measures": ["GCI"]})J") == ErrorCode::ConfigError);
  CHECK_FALSE(config_help().empty());
}

TEST_CASE("scenario expansion crosses every list") {
  auto cfg = ExperimentConfig::from_json(R"J({
    "systems": [ { "name": "mackey-glass", "K": [3, 5], "n": 400, "C": [0, 0.2], "delay": [100, 300] },
                 { "name": "var", "K": 5, "n": 300 } ],
    "measures": ["GCI"], "criteria": { "density": [1] } })J");
  const auto s = expand_scenarios(cfg);
  CHECK(s.size() == 2 * 2 * 2 + 1);
  CHECK(s.back().system == SystemId::SparseVar);
  CHECK(std::isnan(s.back().coupling));
  CHECK(s.front().label() != s[1].label());
}

TEST_CASE("run accounting, determinism and CSV round trip") {
  const auto cfg = ExperimentConfig::from_json(kSmallConfig);
  const auto rows = run_experiment(cfg);
  // scenarios x measures x (one alpha + one density + one magnitude) x realizations
  CHECK(rows.size() == 2u * 2u * 3u * 3u);
  for (const auto& r : rows) {
    CHECK(r.ok());
    CHECK(r.counts.total() == 6);
  }
  CHECK(rows[0].measure == rows[8].measure);
  CHECK(rows[0].criterion == "significance");

  auto again = cfg;
  again.workers = 3;
  std::ostringstream a, b;
  write_results(a, rows);
  write_results(b, run_experiment(again));
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const auto back = read_results(in);
  std::ostringstream c;
  write_results(c, back);
  CHECK(c.str() == a.str());

  // Density at the true edge count keeps exactly that many edges.
  for (const auto& r : rows)
    if (r.criterion == "density") CHECK(r.counts.tp + r.counts.fp == 2);

  std::ostringstream report;
  report_rankings(report, rows);
  CHECK(report.str().find("overall score") != std::string::npos);
}

TEST_CASE("summaries and the family-best overall score") {
  std::vector<ResultRow> rows;
  for (double c : {0.1, 0.2}) {
    for (int r = 0; r < 3; ++r) {
      rows.push_back(synthetic_row("GCI(p=1)", c, r, 0));
      rows.push_back(synthetic_row("GCI(p=3)", c, r, 2));
      rows.push_back(synthetic_row("TE(m=2,tau=1)", c, r, 1));
    }
  }
  std::vector<ResultRow> one_scenario;
  for (const auto& r : rows)
    if (r.scenario.coupling == 0.1) one_scenario.push_back(r);
  const auto summary = summarize(one_scenario);
  REQUIRE(summary.size() == 3);
  CHECK(summary[0].measure == "GCI(p=1)");
  CHECK(summary[0].rank == 1);
  CHECK(summary[0].mcc == 1.0);
  CHECK(summary[0].realizations == 3);
  CHECK(summary[2].measure == "GCI(p=3)");

  std::ostringstream out;
  report_rankings(out, rows);
  const std::string text = out.str();
  const auto overall = text.substr(text.find("overall score"));
  CHECK(count_lines_with(overall, "GCI(p=1)") == 1);
  CHECK(count_lines_with(overall, "GCI(p=3)") == 0);
  CHECK(overall.find("s=1.000") != std::string::npos);
  CHECK(overall.find("s=0.500") != std::string::npos);

  std::vector<ResultRow> single;
  for (const auto& r : rows)
    if (r.measure == "TE(m=2,tau=1)") single.push_back(r);
  std::ostringstream solo;
  report_rankings(solo, single);
  CHECK(solo.str().find("TE(m=2,tau=1)                    s=1.000") != std::string::npos);
}

TEST_CASE("failed cells are reported, not dropped") {
  auto cfg = ExperimentConfig::from_json(R"J({
    "system": { "name": "henon", "K": 3, "n": 100 },
    "measures": ["GCI(p=2)", "GCI(p=40)"],
    "criteria": { "density": [1] }, "realizations": 2 })J");
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[2].ok());
  std::ostringstream out;
  report_rankings(out, rows);
  CHECK(out.str().find("failed") != std::string::npos);
}
