#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "causnet/evaluation.hpp"
#include "causnet/measure_spec.hpp"
#include "causnet/significance.hpp"
#include "causnet/systems.hpp"

namespace causnet {

enum class SystemId { Henon, MackeyGlass, NeuralMass, SparseVar };

std::string_view to_string(SystemId id);
/// Accepts "henon"/"S1", "mackey-glass"/"S2", "neural-mass"/"S3", "var"/"S4".
SystemId parse_system(std::string_view text);

/// One system block of a sweep; every list is crossed with the others.
struct SystemSweep {
  SystemId system = SystemId::Henon;
  std::vector<int> k{5};
  std::vector<Index> n{512};
  std::vector<double> couplings{0.2};  // ignored for the sparse VAR
  std::vector<double> parameter;       // Delta (Mackey-Glass) or A (neural mass); empty = default
  int var_order = 3;                   // sparse VAR only
};

struct CriteriaConfig {
  std::vector<double> alphas;               // significance levels
  int surrogates = kDefaultSurrogates;      // M
  std::vector<double> density_multiples;    // rho = round(multiple * rho0)
  std::vector<double> magnitude_multiples;  // threshold from the density rho, averaged over realizations
};

struct ExperimentConfig {
  std::vector<SystemSweep> systems;
  std::vector<MeasureSpec> measures;
  CriteriaConfig criteria;
  int realizations = 10;
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::filesystem::path output = "bench_out";

  void validate() const;
  static ExperimentConfig from_json(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Documented defaults and keys of the config file, for --help.
std::string config_help();

struct Scenario {
  SystemId system = SystemId::Henon;
  int k = 5;
  Index n = 512;
  double coupling = 0.0;   // NaN where the system has none
  double parameter = 0.0;  // Delta or A; NaN where unused
  int var_order = 3;

  /// System cell for the score: everything except the coupling strength.
  std::string cell() const;
  std::string label() const;
};

std::vector<Scenario> expand_scenarios(const ExperimentConfig& cfg);

/// Data (standardized) and ground truth for one realization.
SystemRealization generate(const Scenario& s, std::uint64_t seed);

struct ResultRow {
  Scenario scenario;
  std::string measure;
  std::string criterion;  // significance | density | magnitude
  double criterion_param = 0.0;
  int realization = 0;
  ConfusionCounts counts;
  EvaluationReport report;
  std::string error;  // empty on success, else the error code

  bool ok() const noexcept { return error.empty(); }
};

/// Rows in canonical order: scenario, measure, criterion, parameter, realization.
/// Realization r of every scenario is generated from master_seed ^ r.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(std::istream& in);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

struct MeasureSummary {
  std::string measure;
  double sens = 0.0, spec = 0.0, prec = 0.0, mcc = 0.0, fm = 0.0, hd = 0.0;
  int realizations = 0;
  int failures = 0;
  int rank = 0;
};

/// Means over realizations of one scenario and criterion, ranked by MCC.
std::vector<MeasureSummary> summarize(const std::vector<ResultRow>& rows, std::uint64_t seed = 0);

/// Per-scenario ranking, per-system score tables and the overall score per
/// measure family (best parameterization), for every criterion block.
void report_rankings(std::ostream& out, const std::vector<ResultRow>& rows, std::uint64_t seed = 0);

}  // namespace causnet
