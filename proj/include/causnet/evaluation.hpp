#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causnet/networks.hpp"

namespace causnet {

struct ConfusionCounts {
  int tp = 0, fp = 0, fn = 0, tn = 0;

  int total() const noexcept { return tp + fp + fn + tn; }
};

/// Counts over the K(K-1) ordered off-diagonal pairs.
ConfusionCounts confusion(const AdjacencyNetwork& truth, const AdjacencyNetwork& estimate);

struct EvaluationReport {
  double sens = 0.0, spec = 0.0, prec = 0.0, mcc = 0.0, fm = 0.0;
  int hd = 0;
};

/// Every index with a zero denominator is reported as 0.
EvaluationReport indices(const ConfusionCounts& c);

/// Ordinal ("1234") ranks by decreasing MCC; tied groups receive consecutive
/// ranks in an order drawn from `seed`.
std::vector<int> rank_measures(const std::vector<double>& mcc, std::uint64_t seed);

struct ScoreTable {
  std::vector<std::string> measures;
  std::vector<double> mean_rank;  // P over the coupling strengths of one system cell
  std::vector<double> score;      // (N - P) / (N - 1)
  int n = 0;
};

/// ranks[s][m]: rank of measure m at coupling strength s.
ScoreTable score(const std::vector<std::vector<int>>& ranks, std::vector<std::string> measures);

/// Mean score per measure over system cells that all list the same measures.
std::vector<double> overall_scores(const std::vector<ScoreTable>& cells);

}  // namespace causnet
