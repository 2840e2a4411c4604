#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causnet/error.hpp"

namespace causnet {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x K block of observations, one column per observed variable.
/// Column order is the node order of every network derived from it.
class TimeSeriesSet {
 public:
  explicit TimeSeriesSet(Matrix data, std::vector<std::string> labels = {});

  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  Index n() const noexcept { return data_.rows(); }
  Index k() const noexcept { return data_.cols(); }

  Eigen::Ref<const Vector> column(Index i) const { return data_.col(i); }

  /// Copy with column i replaced; used for surrogate drivers.
  TimeSeriesSet with_column(Index i, const Vector& values) const;

  /// Copy restricted to the given columns, in the order given.
  TimeSeriesSet select(std::span<const Index> columns) const;

 private:
  Matrix data_;
  std::vector<std::string> labels_;
};

struct EmbeddingSpec {
  int m = 2;
  int tau = 1;

  void validate(Index n) const;
};

/// One lagged regressor: variable index (0-based) and lag in samples (>= 1).
struct LagTerm {
  int var = 0;
  int lag = 1;

  auto operator<=>(const LagTerm&) const = default;
};

using LagSet = std::vector<LagTerm>;

/// Throws InvalidArgument on lags < 1 or duplicate terms.
void validate_lag_set(const LagSet& lags);
int max_lag(const LagSet& lags) noexcept;

TimeSeriesSet standardize(const TimeSeriesSet& ts);

/// Rows are (x_t, x_{t-tau}, ..., x_{t-(m-1)tau}) for t = (m-1)tau .. n-1.
Matrix delay_embed(std::span<const double> x, const EmbeddingSpec& spec);
Matrix delay_embed(const Vector& x, const EmbeddingSpec& spec);

struct Design {
  Matrix predictors;
  Vector response;
};

/// Regression rows for t = first_row .. n-1 (0-based), where first_row
/// defaults to the largest lag in `lags`. Passing a larger first_row aligns
/// several designs on a common sample.
Design lagged_design(const TimeSeriesSet& ts, const LagSet& lags, int target, int first_row = -1);

}  // namespace causnet
