#pragma once

#include "causnet/core_data.hpp"
#include "causnet/networks.hpp"
#include "causnet/var_engine.hpp"

namespace causnet {

// All indices are log ratios of residual variances; variances are
// degrees-of-freedom adjusted (RSS / (n_eff - regressors)), so estimates on
// uncoupled pairs scatter around zero and may be slightly negative.

/// ln(s_R^2 / s_U^2): AR(p) of X_j versus the bivariate VAR(p) on (X_i, X_j).
double gci(const TimeSeriesSet& ts, Index i, Index j, int p);
/// Same, with the full K-variable VAR(p) as the unrestricted model.
double cgci(const TimeSeriesSet& ts, Index i, Index j, int p);
/// Partial Granger causality: conditional variances of X_j given Z = rest
/// (excluding X_i and X_j), from residual covariances with and without X_i.
double pgci(const TimeSeriesSet& ts, Index i, Index j, int p);

CausalityMatrix gci_matrix(const TimeSeriesSet& ts, int p);
CausalityMatrix cgci_matrix(const TimeSeriesSet& ts, int p);
CausalityMatrix pgci_matrix(const TimeSeriesSet& ts, int p);
/// Restricted conditional GCI from the forward-BIC restricted VAR.
CausalityMatrix rcgci(const TimeSeriesSet& ts, int p_max);

/// Entries i -> j for j = 0..K-1 (NaN at j == i). These refit only what a
/// single driver needs and serve surrogate loops.
Vector cgci_row(const TimeSeriesSet& ts, Index i, int p);
Vector pgci_row(const TimeSeriesSet& ts, Index i, int p);

/// RCGCI entries from an already fitted design and its restricted selection.
CausalityMatrix rcgci_from(const LaggedGram& gram, const std::vector<LagSet>& selected);

}  // namespace causnet
