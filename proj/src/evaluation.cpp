#include "causnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "causnet/random.hpp"

namespace causnet {
namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ConfusionCounts confusion(const AdjacencyNetwork& truth, const AdjacencyNetwork& estimate) {
  if (truth.k() != estimate.k()) throw Error(ErrorCode::DimensionMismatch, "networks differ in size");
  ConfusionCounts c;
  for (Index i = 0; i < truth.k(); ++i) {
    for (Index j = 0; j < truth.k(); ++j) {
      if (i == j) continue;
      const bool t = truth.edge(i, j), e = estimate.edge(i, j);
      if (t && e) ++c.tp;
      else if (!t && e) ++c.fp;
      else if (t && !e) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

EvaluationReport indices(const ConfusionCounts& c) {
  const double tp = c.tp, fp = c.fp, fn = c.fn, tn = c.tn;
  EvaluationReport r;
  r.sens = ratio(tp, tp + fn);
  r.spec = ratio(tn, tn + fp);
  r.prec = ratio(tp, tp + fp);
  r.mcc = ratio(tp * tn - fp * fn, std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)));
  r.fm = ratio(2.0 * tp, 2.0 * tp + fn + fp);
  r.hd = c.fp + c.fn;
  return r;
}

std::vector<int> rank_measures(const std::vector<double>& mcc, std::uint64_t seed) {
  const std::size_t n = mcc.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Shuffle first, then a stable sort keeps the random order inside tied groups.
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mcc[a] > mcc[b]; });
  std::vector<int> ranks(n);
  for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r + 1);
  return ranks;
}

ScoreTable score(const std::vector<std::vector<int>>& ranks, std::vector<std::string> measures) {
  ScoreTable t;
  t.n = static_cast<int>(measures.size());
  t.measures = std::move(measures);
  if (ranks.empty()) throw Error(ErrorCode::InvalidArgument, "need ranks for at least one coupling strength");
  t.mean_rank.assign(t.measures.size(), 0.0);
  for (const auto& row : ranks) {
    if (row.size() != t.measures.size()) throw Error(ErrorCode::DimensionMismatch, "inconsistent measure count across strengths");
    for (std::size_t m = 0; m < row.size(); ++m) t.mean_rank[m] += row[m];
  }
  t.score.resize(t.measures.size());
  for (std::size_t m = 0; m < t.measures.size(); ++m) {
    t.mean_rank[m] /= static_cast<double>(ranks.size());
    t.score[m] = t.n > 1 ? (t.n - t.mean_rank[m]) / (t.n - 1.0) : 1.0;
  }
  return t;
}

std::vector<double> overall_scores(const std::vector<ScoreTable>& cells) {
  if (cells.empty()) return {};
  std::vector<double> out(cells.front().score.size(), 0.0);
  for (const auto& c : cells) {
    if (c.measures != cells.front().measures) throw Error(ErrorCode::DimensionMismatch, "score tables list different measures");
    for (std::size_t m = 0; m < out.size(); ++m) out[m] += c.score[m];
  }
  for (double& v : out) v /= static_cast<double>(cells.size());
  return out;
}

}  // namespace causnet
