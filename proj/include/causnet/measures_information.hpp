#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causnet/core_data.hpp"
#include "causnet/knn.hpp"
#include "causnet/networks.hpp"

namespace causnet {

// --- nearest-neighbour transfer entropy -----------------------------------

/// I(y_{t+1}; x_t^{(m,tau)} | y_t^{(m,tau)}), t over all samples with a full embedding.
double te(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, const KnnConfig& cfg = {});
/// Same with the embeddings of `conditioning` appended to the condition.
double pte(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, const std::vector<Index>& conditioning,
           const KnnConfig& cfg = {});

inline constexpr int kDefaultConditioningCount = 3;

/// The `count` variables other than i and j with the largest lag-zero MI to
/// X_i (ties to the lower index), returned in increasing index order. When at
/// most `count` candidates remain, all of them are returned.
std::vector<Index> select_conditioning(const TimeSeriesSet& ts, Index i, Index j, int count = kDefaultConditioningCount,
                                       const KnnConfig& cfg = {});

/// Lag-zero MI of X_i with every variable (NaN at i).
Vector lag0_mi_row(const TimeSeriesSet& ts, Index i, const KnnConfig& cfg = {});
/// select_conditioning on precomputed MI scores to the driver.
std::vector<Index> select_conditioning_from(const Vector& mi_to_driver, Index i, Index j,
                                            int count = kDefaultConditioningCount);

CausalityMatrix te_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, const KnnConfig& cfg = {});
CausalityMatrix pte_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, const KnnConfig& cfg = {},
                           int count = kDefaultConditioningCount);

// --- symbolic transfer entropy --------------------------------------------

enum class SymbolicVariant { STE, TERV };

/// Ordinal pattern index (0 .. m!-1) of every embedding vector of x, rows as
/// in delay_embed. Equal values rank the earlier sample lower.
std::vector<std::int64_t> rank_patterns(const Vector& x, const EmbeddingSpec& spec);

/// Plug-in I(F; X | C) in nats from aligned discrete labels.
double plugin_cmi(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& x,
                  const std::vector<std::int64_t>& c);

struct SymbolicEstimate {
  double value = 0.0;
  /// Fewer than five samples per occupied joint cell on average.
  bool undersampled = false;
};

SymbolicEstimate symbolic_te_estimate(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec,
                                      SymbolicVariant variant, const std::vector<Index>& conditioning = {});
double symbolic_te(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, SymbolicVariant variant,
                   const std::vector<Index>& conditioning = {});

/// STE / TERV matrix; `partial` conditions on select_conditioning's choice.
CausalityMatrix symbolic_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, SymbolicVariant variant, bool partial,
                                const KnnConfig& cfg = {}, int count = kDefaultConditioningCount);

// --- partial mutual information from mixed embedding ----------------------

struct PmimeConfig {
  int max_lag = 5;       // L
  double a_stop = 0.97;  // stop once I(y; old) / I(y; new) reaches this ratio
  KnnConfig knn;
};

struct MixedEmbedding {
  LagSet selected;            // terms x_{var, t-lag+1}, lag = 1..L, in selection order
  std::vector<double> gains;  // conditional information of each accepted term
  double total_information = 0.0;
};

/// Greedy mixed embedding for the future of variable j.
MixedEmbedding mixed_embedding(const TimeSeriesSet& ts, Index j, const PmimeConfig& cfg = {});
/// Column j of the PMIME matrix (drivers -> j), NaN at j.
Vector pmime_column(const TimeSeriesSet& ts, Index j, const PmimeConfig& cfg = {});
CausalityMatrix pmime(const TimeSeriesSet& ts, const PmimeConfig& cfg = {});

}  // namespace causnet
