#include "causnet/significance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "causnet/parallel.hpp"

namespace causnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Entry {
  double value;
  Index i, j;
};

// Off-diagonal entries sorted by decreasing value, then by (i, j). NaN sorts last.
std::vector<Entry> ranked_entries(const CausalityMatrix& r) {
  std::vector<Entry> out;
  for (Index i = 0; i < r.k(); ++i) {
    for (Index j = 0; j < r.k(); ++j) {
      if (i != j) out.push_back({r(i, j), i, j});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (std::isnan(a.value) || std::isnan(b.value)) return !std::isnan(a.value) && std::isnan(b.value);
    return a.value > b.value;
  });
  return out;
}

void check_rho(const CausalityMatrix& r, int rho) {
  const Index pairs = r.k() * (r.k() - 1);
  if (rho < 1 || rho > pairs) throw Error(ErrorCode::InvalidArgument, "density must lie in [1, K(K-1)]");
}

}  // namespace

Vector cyclic_shift(const Vector& x, Index w) {
  const Index n = x.size();
  Vector out(n);
  const Index s = ((w % n) + n) % n;
  out.head(n - s) = x.tail(n - s);
  out.tail(s) = x.head(s);
  return out;
}

Index draw_shift(Index n, Rng& rng) {
  if (n < 100) throw Error(ErrorCode::SeriesTooShort, "time-shifted surrogates need n >= 100");
  std::uniform_int_distribution<Index> shift(kMinShift, n - kMinShift);
  return shift(rng);
}

Vector time_shift_surrogate(const Vector& x, std::uint64_t seed) {
  Rng rng(seed);
  return cyclic_shift(x, draw_shift(x.size(), rng));
}

double randomization_p_value(int rank, int surrogates) {
  if (surrogates < 1 || rank < 1 || rank > surrogates + 1) throw Error(ErrorCode::InvalidArgument, "rank out of range");
  return 1.0 - (static_cast<double>(rank) - 0.326) / (static_cast<double>(surrogates) + 1.0 + 0.348);
}

SurrogateTestResult rank_test(double original, std::vector<double> surrogates) {
  SurrogateTestResult out;
  out.original = original;
  int rank = 1;
  if (!std::isnan(original)) {
    for (double v : surrogates) rank += v < original;
  }
  out.rank = rank;
  out.p_value = randomization_p_value(rank, static_cast<int>(surrogates.size()));
  out.surrogates = std::move(surrogates);
  return out;
}

SurrogateTestResult surrogate_test(const PairEvaluator& measure, const TimeSeriesSet& ts, Index i, Index j, int surrogates,
                                   std::uint64_t seed) {
  if (surrogates < 19) throw Error(ErrorCode::InvalidArgument, "need at least 19 surrogates");
  if (i == j) throw Error(ErrorCode::InvalidArgument, "driver and response must differ");
  const double original = measure(ts, i, j);
  const Vector driver = ts.column(i);
  std::vector<double> values(static_cast<std::size_t>(surrogates));
  for (int m = 0; m < surrogates; ++m) {
    const auto s = derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(m)});
    values[static_cast<std::size_t>(m)] = measure(ts.with_column(i, time_shift_surrogate(driver, s)), i, j);
  }
  return rank_test(original, std::move(values));
}

SignificanceMatrix surrogate_p_values(const DriverRowEvaluator& row, const TimeSeriesSet& ts, int surrogates,
                                      std::uint64_t seed, int workers) {
  if (surrogates < 19) throw Error(ErrorCode::InvalidArgument, "need at least 19 surrogates");
  const Index k = ts.k();
  const auto reps = static_cast<std::size_t>(surrogates);
  // Task (i, 0) is the original row, (i, m + 1) replica m.
  std::vector<Vector> rows(static_cast<std::size_t>(k) * (reps + 1));
  parallel_for(rows.size(), workers, [&](std::size_t task) {
    const auto i = static_cast<Index>(task / (reps + 1));
    const std::size_t slot = task % (reps + 1);
    if (slot == 0) {
      rows[task] = row(ts, i);
      return;
    }
    const auto s = derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(slot - 1)});
    rows[task] = row(ts.with_column(i, time_shift_surrogate(Vector(ts.column(i)), s)), i);
  });

  SignificanceMatrix out{Matrix::Constant(k, k, kNaN), Matrix::Constant(k, k, kNaN)};
  for (Index i = 0; i < k; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * (reps + 1);
    for (Index j = 0; j < k; ++j) {
      if (i == j) continue;
      std::vector<double> values(reps);
      for (std::size_t m = 0; m < reps; ++m) values[m] = rows[base + 1 + m](j);
      const auto test = rank_test(rows[base](j), std::move(values));
      out.original(i, j) = test.original;
      out.p_values(i, j) = test.p_value;
    }
  }
  return out;
}

AdjacencyNetwork binarize_significance(const Matrix& p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  if (p_values.rows() != p_values.cols()) throw Error(ErrorCode::DimensionMismatch, "p-value matrix must be square");
  auto net = AdjacencyNetwork::empty(p_values.rows(), "significance(alpha=" + std::to_string(alpha) + ")");
  for (Index i = 0; i < p_values.rows(); ++i) {
    for (Index j = 0; j < p_values.cols(); ++j) {
      if (i != j && p_values(i, j) < alpha) net.set_edge(i, j, true);
    }
  }
  return net;
}

AdjacencyNetwork binarize_density(const CausalityMatrix& r, int rho) {
  check_rho(r, rho);
  auto net = AdjacencyNetwork::empty(r.k(), "density(rho=" + std::to_string(rho) + ")");
  const auto entries = ranked_entries(r);
  for (int e = 0; e < rho; ++e) net.set_edge(entries[static_cast<std::size_t>(e)].i, entries[static_cast<std::size_t>(e)].j, true);
  return net;
}

AdjacencyNetwork binarize_magnitude(const CausalityMatrix& r, double threshold) {
  if (std::isnan(threshold)) throw Error(ErrorCode::InvalidArgument, "threshold must not be NaN");
  auto net = AdjacencyNetwork::empty(r.k(), "magnitude(th=" + std::to_string(threshold) + ")");
  for (Index i = 0; i < r.k(); ++i) {
    for (Index j = 0; j < r.k(); ++j) {
      if (i != j && r(i, j) >= threshold) net.set_edge(i, j, true);
    }
  }
  return net;
}

AdjacencyNetwork binarize_pmime(const CausalityMatrix& r) {
  auto net = AdjacencyNetwork::empty(r.k(), "pmime");
  for (Index i = 0; i < r.k(); ++i) {
    for (Index j = 0; j < r.k(); ++j) {
      if (i != j && r(i, j) > 0.0) net.set_edge(i, j, true);
    }
  }
  return net;
}

double density_threshold(const CausalityMatrix& r, int rho) {
  check_rho(r, rho);
  return ranked_entries(r)[static_cast<std::size_t>(rho - 1)].value;
}

double threshold_from_density(const std::vector<CausalityMatrix>& realizations, int rho) {
  if (realizations.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one realization");
  double sum = 0.0;
  for (const auto& r : realizations) sum += density_threshold(r, rho);
  return sum / static_cast<double>(realizations.size());
}

}  // namespace causnet
