#include "causnet/measures_information.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace causnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_pair(const TimeSeriesSet& ts, Index i, Index j) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  if (i < 0 || j < 0 || i >= ts.k() || j >= ts.k()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (i == j) throw Error(ErrorCode::InvalidArgument, "driver and response must differ");
}

// Aligned samples for transfer entropy: rows t = (m-1)tau .. n-2.
struct TeSamples {
  Matrix future;  // y_{t+1}
  Matrix driver;  // x embedding at t
  Matrix cond;    // y embedding at t, then conditioning embeddings
};

TeSamples te_samples(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec,
                     const std::vector<Index>& conditioning) {
  spec.validate(ts.n());
  const Index offset = static_cast<Index>(spec.m - 1) * spec.tau;
  const Index rows = ts.n() - 1 - offset;
  if (rows < 1) throw Error(ErrorCode::SeriesTooShort, "series too short for the embedding");
  TeSamples s;
  s.future = ts.data().col(j).segment(offset + 1, rows);
  s.driver = delay_embed(Vector(ts.data().col(i)), spec).topRows(rows);
  s.cond.resize(rows, static_cast<Index>(spec.m) * static_cast<Index>(1 + conditioning.size()));
  s.cond.leftCols(spec.m) = delay_embed(Vector(ts.data().col(j)), spec).topRows(rows);
  for (std::size_t c = 0; c < conditioning.size(); ++c) {
    const Index v = conditioning[c];
    if (v == i || v == j) throw Error(ErrorCode::InvalidArgument, "conditioning set must exclude driver and response");
    s.cond.middleCols(static_cast<Index>(spec.m) * static_cast<Index>(c + 1), spec.m) =
        delay_embed(Vector(ts.data().col(v)), spec).topRows(rows);
  }
  return s;
}

Matrix lag0_mi_matrix(const TimeSeriesSet& ts, const KnnConfig& cfg) {
  const Index k = ts.k();
  Matrix mi = Matrix::Constant(k, k, kNaN);
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) {
      mi(a, b) = mi(b, a) = knn_mi(Matrix(ts.data().col(a)), Matrix(ts.data().col(b)), cfg);
    }
  }
  return mi;
}

std::vector<Index> top_by_mi(Index k, Index i, Index j, int count, const std::function<double(Index)>& mi) {
  std::vector<Index> rest;
  for (Index v = 0; v < k; ++v) {
    if (v != i && v != j) rest.push_back(v);
  }
  if (static_cast<Index>(rest.size()) <= count) return rest;
  std::vector<std::pair<double, Index>> scored;
  for (Index v : rest) scored.emplace_back(mi(v), v);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Index> out;
  for (int c = 0; c < count; ++c) out.push_back(scored[static_cast<std::size_t>(c)].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// nearest-neighbour transfer entropy

double te(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, const KnnConfig& cfg) {
  return pte(ts, i, j, spec, {}, cfg);
}

double pte(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, const std::vector<Index>& conditioning,
           const KnnConfig& cfg) {
  check_pair(ts, i, j);
  const TeSamples s = te_samples(ts, i, j, spec, conditioning);
  return knn_cmi(s.future, s.driver, s.cond, cfg);
}

std::vector<Index> select_conditioning(const TimeSeriesSet& ts, Index i, Index j, int count, const KnnConfig& cfg) {
  check_pair(ts, i, j);
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "conditioning count must be >= 0");
  const Matrix xi = ts.data().col(i);
  return top_by_mi(ts.k(), i, j, count, [&](Index v) { return knn_mi(xi, Matrix(ts.data().col(v)), cfg); });
}

Vector lag0_mi_row(const TimeSeriesSet& ts, Index i, const KnnConfig& cfg) {
  Vector out = Vector::Constant(ts.k(), kNaN);
  const Matrix xi = ts.data().col(i);
  for (Index v = 0; v < ts.k(); ++v) {
    if (v != i) out(v) = knn_mi(xi, Matrix(ts.data().col(v)), cfg);
  }
  return out;
}

std::vector<Index> select_conditioning_from(const Vector& mi_to_driver, Index i, Index j, int count) {
  return top_by_mi(mi_to_driver.size(), i, j, count, [&](Index v) { return mi_to_driver(v); });
}

CausalityMatrix te_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, const KnnConfig& cfg) {
  auto out = CausalityMatrix::zeros(ts.k(), "TE(m=" + std::to_string(spec.m) + ",tau=" + std::to_string(spec.tau) + ")");
  for (Index i = 0; i < ts.k(); ++i) {
    for (Index j = 0; j < ts.k(); ++j) {
      if (i != j) out(i, j) = te(ts, i, j, spec, cfg);
    }
  }
  return out;
}

CausalityMatrix pte_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, const KnnConfig& cfg, int count) {
  auto out = CausalityMatrix::zeros(ts.k(), "PTE(m=" + std::to_string(spec.m) + ",tau=" + std::to_string(spec.tau) + ")");
  const bool needs_mi = ts.k() - 2 > count;
  const Matrix mi = needs_mi ? lag0_mi_matrix(ts, cfg) : Matrix();
  for (Index i = 0; i < ts.k(); ++i) {
    for (Index j = 0; j < ts.k(); ++j) {
      if (i == j) continue;
      const auto cond = top_by_mi(ts.k(), i, j, count, [&](Index v) { return mi(i, v); });
      out(i, j) = pte(ts, i, j, spec, cond, cfg);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// symbolic transfer entropy

std::vector<std::int64_t> rank_patterns(const Vector& x, const EmbeddingSpec& spec) {
  if (spec.m < 2) throw Error(ErrorCode::InvalidArgument, "rank patterns need m >= 2");
  if (spec.m > 10) throw Error(ErrorCode::InvalidArgument, "rank patterns support m <= 10");
  const Matrix emb = delay_embed(x, spec);
  const int m = spec.m;
  std::array<std::int64_t, 11> factorial{};
  factorial[0] = 1;
  for (int a = 1; a <= 10; ++a) factorial[static_cast<std::size_t>(a)] = factorial[static_cast<std::size_t>(a - 1)] * a;

  std::vector<std::int64_t> out(static_cast<std::size_t>(emb.rows()));
  std::array<double, 10> e{};
  std::array<int, 10> rank{};
  for (Index r = 0; r < emb.rows(); ++r) {
    // Temporal order: e[0] is the oldest sample of the window.
    for (int a = 0; a < m; ++a) e[static_cast<std::size_t>(a)] = emb(r, m - 1 - a);
    for (int a = 0; a < m; ++a) {
      int rk = 0;
      for (int b = 0; b < m; ++b) {
        const double eb = e[static_cast<std::size_t>(b)], ea = e[static_cast<std::size_t>(a)];
        if (eb < ea || (eb == ea && b < a)) ++rk;
      }
      rank[static_cast<std::size_t>(a)] = rk;
    }
    std::int64_t code = 0;
    for (int a = 0; a < m; ++a) {
      int smaller_later = 0;
      for (int b = a + 1; b < m; ++b) smaller_later += rank[static_cast<std::size_t>(b)] < rank[static_cast<std::size_t>(a)];
      code += smaller_later * factorial[static_cast<std::size_t>(m - 1 - a)];
    }
    out[static_cast<std::size_t>(r)] = code;
  }
  return out;
}

namespace {

// sum over distinct keys of count * ln(count)
template <typename Key>
double sum_nlogn(std::vector<Key> keys) {
  std::sort(keys.begin(), keys.end());
  double acc = 0.0;
  std::size_t run = 1;
  for (std::size_t a = 1; a <= keys.size(); ++a) {
    if (a < keys.size() && keys[a] == keys[a - 1]) {
      ++run;
      continue;
    }
    if (!keys.empty()) acc += static_cast<double>(run) * std::log(static_cast<double>(run));
    run = 1;
  }
  return acc;
}

std::size_t distinct_cells(std::vector<std::array<std::int64_t, 3>> keys) {
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

double plugin_cmi(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& x,
                  const std::vector<std::int64_t>& c) {
  const std::size_t n = f.size();
  if (x.size() != n || c.size() != n) throw Error(ErrorCode::DimensionMismatch, "symbol streams differ in length");
  if (n == 0) throw Error(ErrorCode::TooFewSamples, "empty symbol stream");
  using Pair = std::array<std::int64_t, 2>;
  using Triple = std::array<std::int64_t, 3>;
  std::vector<Pair> fc(n), xc(n);
  std::vector<Triple> fxc(n);
  for (std::size_t t = 0; t < n; ++t) {
    fc[t] = {f[t], c[t]};
    xc[t] = {x[t], c[t]};
    fxc[t] = {f[t], x[t], c[t]};
  }
  // H(F,C) + H(X,C) - H(C) - H(F,X,C); the ln N terms cancel.
  const double value = (-sum_nlogn(std::move(fc)) - sum_nlogn(std::move(xc)) + sum_nlogn(c) + sum_nlogn(std::move(fxc))) /
                       static_cast<double>(n);
  return value;
}

SymbolicEstimate symbolic_te_estimate(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec,
                                      SymbolicVariant variant, const std::vector<Index>& conditioning) {
  check_pair(ts, i, j);
  spec.validate(ts.n());
  const Index offset = static_cast<Index>(spec.m - 1) * spec.tau;
  const Index rows = ts.n() - 1 - offset;  // t = offset .. n-2
  if (rows < 1) throw Error(ErrorCode::SeriesTooShort, "series too short for the embedding");

  const Vector y = ts.data().col(j);
  const auto py = rank_patterns(y, spec);
  const auto px = rank_patterns(Vector(ts.data().col(i)), spec);
  std::int64_t base = 1;
  for (int a = 2; a <= spec.m; ++a) base *= a;

  std::vector<std::int64_t> f(static_cast<std::size_t>(rows)), x(px.begin(), px.begin() + rows),
      c(py.begin(), py.begin() + rows);
  for (Index r = 0; r < rows; ++r) {
    const auto s = static_cast<std::size_t>(r);
    if (variant == SymbolicVariant::STE) {
      f[s] = py[s + 1];
    } else {
      // Rank of y_{t+1} inside the window formed with the current embedding.
      const Index t = r + offset;
      const double next = y(t + 1);
      std::int64_t rank = 0;
      for (int a = 0; a < spec.m; ++a) rank += y(t - static_cast<Index>(a) * spec.tau) <= next;
      f[s] = rank;
    }
  }
  for (Index v : conditioning) {
    if (v == i || v == j) throw Error(ErrorCode::InvalidArgument, "conditioning set must exclude driver and response");
    const auto pv = rank_patterns(Vector(ts.data().col(v)), spec);
    for (Index r = 0; r < rows; ++r) c[static_cast<std::size_t>(r)] = c[static_cast<std::size_t>(r)] * base + pv[static_cast<std::size_t>(r)];
  }

  SymbolicEstimate est;
  est.value = plugin_cmi(f, x, c);
  std::vector<std::array<std::int64_t, 3>> cells(static_cast<std::size_t>(rows));
  for (std::size_t s = 0; s < cells.size(); ++s) cells[s] = {f[s], x[s], c[s]};
  est.undersampled = static_cast<double>(rows) < 5.0 * static_cast<double>(distinct_cells(std::move(cells)));
  return est;
}

double symbolic_te(const TimeSeriesSet& ts, Index i, Index j, const EmbeddingSpec& spec, SymbolicVariant variant,
                   const std::vector<Index>& conditioning) {
  return symbolic_te_estimate(ts, i, j, spec, variant, conditioning).value;
}

CausalityMatrix symbolic_matrix(const TimeSeriesSet& ts, const EmbeddingSpec& spec, SymbolicVariant variant, bool partial,
                                const KnnConfig& cfg, int count) {
  std::string name = variant == SymbolicVariant::STE ? "STE" : "TERV";
  if (partial) name = "P" + name;
  auto out = CausalityMatrix::zeros(ts.k(), name + "(m=" + std::to_string(spec.m) + ",tau=" + std::to_string(spec.tau) + ")");
  const bool needs_mi = partial && ts.k() - 2 > count;
  const Matrix mi = needs_mi ? lag0_mi_matrix(ts, cfg) : Matrix();
  for (Index i = 0; i < ts.k(); ++i) {
    for (Index j = 0; j < ts.k(); ++j) {
      if (i == j) continue;
      std::vector<Index> cond;
      if (partial) cond = top_by_mi(ts.k(), i, j, count, [&](Index v) { return mi(i, v); });
      out(i, j) = symbolic_te(ts, i, j, spec, variant, cond);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// mixed embedding

namespace {

// Pre-jittered columns of the response future and every lagged candidate.
class EmbeddingPool {
 public:
  EmbeddingPool(const TimeSeriesSet& ts, Index j, const PmimeConfig& cfg) : k_(ts.k()), l_(cfg.max_lag), knn_(cfg.knn) {
    n_ = ts.n() - l_;  // t = L-1 .. n-2
    Matrix cols(n_, 1 + k_ * l_);
    cols.col(0) = ts.data().col(j).segment(l_, n_);
    for (Index v = 0; v < k_; ++v) {
      for (int lag = 1; lag <= l_; ++lag) cols.col(index(v, lag)) = ts.data().col(v).segment(l_ - lag, n_);
    }
    const JointSample js({&cols}, knn_);
    data_ = js.data();
    width_ = static_cast<int>(cols.cols());
  }

  Index n() const noexcept { return n_; }
  int candidates() const noexcept { return width_ - 1; }
  int index(Index var, int lag) const noexcept { return 1 + static_cast<int>(var) * l_ + (lag - 1); }
  LagTerm term(int index) const noexcept { return {(index - 1) / l_, (index - 1) % l_ + 1}; }

  std::vector<double> rows(const std::vector<int>& cols) const {
    const auto q = cols.size();
    std::vector<double> out(static_cast<std::size_t>(n_) * q);
    for (Index t = 0; t < n_; ++t) {
      const double* src = data_.data() + t * width_;
      for (std::size_t c = 0; c < q; ++c) out[static_cast<std::size_t>(t) * q + c] = src[cols[c]];
    }
    return out;
  }

  /// I(future; a | b) from precomputed counters for (future ⊕ b) and b.
  double cmi(const std::vector<int>& a, const std::vector<int>& b, const NeighborCounter& yb,
             const NeighborCounter* bonly) const {
    std::vector<int> joint{0};
    joint.insert(joint.end(), a.begin(), a.end());
    joint.insert(joint.end(), b.begin(), b.end());
    const auto eps = kth_distances(rows(joint), n_, static_cast<int>(joint.size()), knn_.k);
    std::vector<int> ab(a);
    ab.insert(ab.end(), b.begin(), b.end());
    const NeighborCounter abc(rows(ab), n_, static_cast<int>(ab.size()));
    double acc = 0.0;
    for (Index p = 0; p < n_; ++p) {
      const double e = eps[static_cast<std::size_t>(p)];
      const Index nz = bonly ? bonly->count(p, e) : n_ - 1;
      acc += digamma_int(abc.count(p, e) + 1) + digamma_int(yb.count(p, e) + 1) - digamma_int(nz + 1);
    }
    return digamma_int(knn_.k) - acc / static_cast<double>(n_);
  }

  NeighborCounter counter(const std::vector<int>& cols) const {
    return NeighborCounter(rows(cols), n_, static_cast<int>(cols.size()));
  }

  const KnnConfig& knn() const noexcept { return knn_; }

 private:
  Index k_;
  int l_;
  KnnConfig knn_;
  Index n_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

void check_pmime(const TimeSeriesSet& ts, const PmimeConfig& cfg) {
  if (cfg.max_lag < 1) throw Error(ErrorCode::InvalidArgument, "maximum lag must be >= 1");
  if (!(cfg.a_stop > 0.0 && cfg.a_stop <= 1.0)) throw Error(ErrorCode::InvalidArgument, "stopping ratio must lie in (0, 1]");
  if (ts.n() - cfg.max_lag < 50) throw Error(ErrorCode::TooFewSamples, "series too short for the mixed embedding");
}

struct EmbeddingRun {
  std::vector<int> selected;
  MixedEmbedding result;
};

EmbeddingRun run_embedding(const EmbeddingPool& pool, const PmimeConfig& cfg) {
  EmbeddingRun run;
  std::vector<bool> used(static_cast<std::size_t>(pool.candidates() + 1), false);
  double info = 0.0;
  const NeighborCounter future = pool.counter({0});

  while (static_cast<int>(run.selected.size()) < pool.candidates()) {
    // Counters shared by every candidate of this step.
    std::vector<int> yb{0};
    yb.insert(yb.end(), run.selected.begin(), run.selected.end());
    const NeighborCounter yb_counter = pool.counter(yb);
    std::optional<NeighborCounter> b_counter;
    if (!run.selected.empty()) b_counter.emplace(pool.counter(run.selected));

    double best = -std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (int c = 1; c <= pool.candidates(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double gain = pool.cmi({c}, run.selected, yb_counter, b_counter ? &*b_counter : nullptr);
      if (gain > best) {
        best = gain;
        best_index = c;
      }
    }
    if (best_index < 0) break;

    // Chain rule: I(future; grown) = I(future; selected) + gain. The direct
    // kNN estimate of the grown set is biased low as the dimension rises.
    const double next = info + best;
    if (!(best > 0.0)) break;
    if (!run.selected.empty() && info / next >= cfg.a_stop) break;

    used[static_cast<std::size_t>(best_index)] = true;
    run.selected.push_back(best_index);
    run.result.selected.push_back(pool.term(best_index));
    run.result.gains.push_back(best);
    info = next;
  }
  run.result.total_information = run.selected.empty() ? 0.0 : pool.cmi(run.selected, {}, future, nullptr);
  return run;
}

}  // namespace

MixedEmbedding mixed_embedding(const TimeSeriesSet& ts, Index j, const PmimeConfig& cfg) {
  check_pmime(ts, cfg);
  if (j < 0 || j >= ts.k()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  const EmbeddingPool pool(ts, j, cfg);
  return run_embedding(pool, cfg).result;
}

Vector pmime_column(const TimeSeriesSet& ts, Index j, const PmimeConfig& cfg) {
  check_pmime(ts, cfg);
  if (j < 0 || j >= ts.k()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  const EmbeddingPool pool(ts, j, cfg);
  const EmbeddingRun run = run_embedding(pool, cfg);
  Vector col = Vector::Zero(ts.k());
  col(j) = kNaN;
  const double total = run.result.total_information;
  if (run.selected.empty() || !(total > 0.0)) return col;

  for (Index i = 0; i < ts.k(); ++i) {
    if (i == j) continue;
    std::vector<int> own, rest;
    for (std::size_t s = 0; s < run.selected.size(); ++s) {
      (run.result.selected[s].var == i ? own : rest).push_back(run.selected[s]);
    }
    if (own.empty()) continue;
    std::vector<int> yrest{0};
    yrest.insert(yrest.end(), rest.begin(), rest.end());
    const NeighborCounter yb = pool.counter(yrest);
    std::optional<NeighborCounter> b;
    if (!rest.empty()) b.emplace(pool.counter(rest));
    const double cmi = pool.cmi(own, rest, yb, b ? &*b : nullptr);
    col(i) = std::max(0.0, cmi / total);
  }
  return col;
}

CausalityMatrix pmime(const TimeSeriesSet& ts, const PmimeConfig& cfg) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  auto out = CausalityMatrix::zeros(ts.k(), "PMIME(L=" + std::to_string(cfg.max_lag) + ")");
  for (Index j = 0; j < ts.k(); ++j) {
    const Vector col = pmime_column(ts, j, cfg);
    for (Index i = 0; i < ts.k(); ++i) {
      if (i != j) out(i, j) = col(i);
    }
  }
  return out;
}

}  // namespace causnet
