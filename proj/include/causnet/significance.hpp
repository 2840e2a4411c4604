#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "causnet/core_data.hpp"
#include "causnet/networks.hpp"
#include "causnet/random.hpp"

namespace causnet {

inline constexpr int kDefaultSurrogates = 100;
inline constexpr Index kMinShift = 20;  // shifts are drawn from {20, ..., n - 20}

/// x*[t] = x[(t + w) mod n].
Vector cyclic_shift(const Vector& x, Index w);
Index draw_shift(Index n, Rng& rng);
/// Cyclic rotation of x by a random admissible step.
Vector time_shift_surrogate(const Vector& x, std::uint64_t seed);

/// p = 1 - (r0 - 0.326) / (M + 1 + 0.348), r0 in 1..M+1 (ascending rank of the original).
double randomization_p_value(int rank, int surrogates);

struct SurrogateTestResult {
  double original = 0.0;
  std::vector<double> surrogates;
  int rank = 1;
  double p_value = 1.0;
};

/// Ranks the original among its surrogates. Ties count against the original
/// (r0 = 1 + #{R_m < R_0}); a NaN original gets rank 1.
SurrogateTestResult rank_test(double original, std::vector<double> surrogates);

using PairEvaluator = std::function<double(const TimeSeriesSet&, Index, Index)>;
/// Entries i -> j for every response j (NaN at i), given a data set.
using DriverRowEvaluator = std::function<Vector(const TimeSeriesSet&, Index)>;

/// Single-pair randomization test: M surrogates of the driver column only.
/// Replica m uses the seed derived from (seed, i, j, m).
SurrogateTestResult surrogate_test(const PairEvaluator& measure, const TimeSeriesSet& ts, Index i, Index j, int surrogates,
                                   std::uint64_t seed);

struct SignificanceMatrix {
  Matrix original;  // R_0
  Matrix p_values;  // NaN diagonal
};

/// Full-matrix test. For each driver i and replica m one surrogate of X_i
/// (seed derived from (seed, i, m)) serves all responses j, so a whole row
/// is evaluated per replica.
SignificanceMatrix surrogate_p_values(const DriverRowEvaluator& row, const TimeSeriesSet& ts, int surrogates,
                                      std::uint64_t seed, int workers = 1);

AdjacencyNetwork binarize_significance(const Matrix& p_values, double alpha);
/// The rho largest off-diagonal entries; ties go to the lower (i, j).
AdjacencyNetwork binarize_density(const CausalityMatrix& r, int rho);
/// Edge iff R(i, j) >= threshold, so th_rho of a single realization keeps rho edges.
AdjacencyNetwork binarize_magnitude(const CausalityMatrix& r, double threshold);
AdjacencyNetwork binarize_pmime(const CausalityMatrix& r);

/// The rho-th largest off-diagonal value.
double density_threshold(const CausalityMatrix& r, int rho);
/// Mean of density_threshold over realizations of one (measure, system, C).
double threshold_from_density(const std::vector<CausalityMatrix>& realizations, int rho);

}  // namespace causnet
