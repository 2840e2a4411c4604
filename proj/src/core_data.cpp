#include "causnet/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace causnet {

TimeSeriesSet::TimeSeriesSet(Matrix data, std::vector<std::string> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (data_.rows() < 2) {
    throw Error(ErrorCode::SeriesTooShort, "a time series set needs at least 2 samples");
  }
  if (data_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "a time series set needs at least one variable");
  }
  if (!data_.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "time series contains NaN or Inf");
  }
  if (labels_.empty()) {
    labels_.reserve(static_cast<std::size_t>(data_.cols()));
    for (Index j = 0; j < data_.cols(); ++j) labels_.push_back("X" + std::to_string(j + 1));
  } else if (static_cast<Index>(labels_.size()) != data_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match column count");
  }
}

TimeSeriesSet TimeSeriesSet::with_column(Index i, const Vector& values) const {
  if (values.size() != n()) {
    throw Error(ErrorCode::DimensionMismatch, "replacement column has wrong length");
  }
  Matrix copy = data_;
  copy.col(i) = values;
  return TimeSeriesSet(std::move(copy), labels_);
}

TimeSeriesSet TimeSeriesSet::select(std::span<const Index> columns) const {
  Matrix sub(n(), static_cast<Index>(columns.size()));
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    sub.col(static_cast<Index>(c)) = data_.col(columns[c]);
    names.push_back(labels_[static_cast<std::size_t>(columns[c])]);
  }
  return TimeSeriesSet(std::move(sub), std::move(names));
}

void EmbeddingSpec::validate(Index n) const {
  if (m < 1 || tau < 1) {
    throw Error(ErrorCode::InvalidArgument, "embedding needs m >= 1 and tau >= 1");
  }
  if (static_cast<Index>(m - 1) * tau >= n) {
    throw Error(ErrorCode::SeriesTooShort, "series shorter than the embedding window");
  }
}

void validate_lag_set(const LagSet& lags) {
  std::set<LagTerm> seen;
  for (const auto& term : lags) {
    if (term.lag < 1) throw Error(ErrorCode::InvalidArgument, "lags must be >= 1");
    if (term.var < 0) throw Error(ErrorCode::InvalidArgument, "negative variable index");
    if (!seen.insert(term).second) throw Error(ErrorCode::InvalidArgument, "duplicate lag term");
  }
}

int max_lag(const LagSet& lags) noexcept {
  int out = 0;
  for (const auto& term : lags) out = std::max(out, term.lag);
  return out;
}

TimeSeriesSet standardize(const TimeSeriesSet& ts) {
  Matrix out = ts.data();
  const double n = static_cast<double>(ts.n());
  for (Index j = 0; j < out.cols(); ++j) {
    auto col = out.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double var = col.squaredNorm() / (n - 1.0);
    if (!(var > 0.0)) {
      throw Error(ErrorCode::ConstantChannel, "channel " + ts.labels()[static_cast<std::size_t>(j)] +
                                                  " has zero variance");
    }
    col /= std::sqrt(var);
  }
  return TimeSeriesSet(std::move(out), ts.labels());
}

Matrix delay_embed(std::span<const double> x, const EmbeddingSpec& spec) {
  const auto n = static_cast<Index>(x.size());
  spec.validate(n);
  const Index span = static_cast<Index>(spec.m - 1) * spec.tau;
  const Index rows = n - span;
  Matrix out(rows, spec.m);
  for (Index r = 0; r < rows; ++r) {
    const Index t = r + span;
    for (int c = 0; c < spec.m; ++c) out(r, c) = x[static_cast<std::size_t>(t - c * spec.tau)];
  }
  return out;
}

Matrix delay_embed(const Vector& x, const EmbeddingSpec& spec) {
  return delay_embed(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), spec);
}

Design lagged_design(const TimeSeriesSet& ts, const LagSet& lags, int target, int first_row) {
  validate_lag_set(lags);
  const int maxlag = max_lag(lags);
  if (maxlag >= ts.n()) throw Error(ErrorCode::SeriesTooShort, "lag exceeds series length");
  if (target < 0 || target >= ts.k()) throw Error(ErrorCode::InvalidArgument, "target out of range");
  const int start = std::max(first_row, maxlag);
  if (start >= ts.n()) throw Error(ErrorCode::SeriesTooShort, "no rows left after alignment");

  const Index rows = ts.n() - start;
  Design d{Matrix(rows, static_cast<Index>(lags.size())), ts.data().col(target).tail(rows)};
  for (std::size_t c = 0; c < lags.size(); ++c) {
    const auto& term = lags[c];
    if (term.var >= ts.k()) throw Error(ErrorCode::InvalidArgument, "lag variable out of range");
    d.predictors.col(static_cast<Index>(c)) = ts.data().col(term.var).segment(start - term.lag, rows);
  }
  return d;
}

}  // namespace causnet
