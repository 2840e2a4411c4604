#include "causnet/measures_linear.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace causnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_pair(const TimeSeriesSet& ts, Index i, Index j) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  if (i < 0 || j < 0 || i >= ts.k() || j >= ts.k()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (i == j) throw Error(ErrorCode::InvalidArgument, "driver and response must differ");
}

double dof_variance(double rss, Index n_eff, std::size_t q) {
  return rss / static_cast<double>(n_eff - static_cast<Index>(q));
}

// ln(s_R^2 / s_U^2) for equation j of `gram`, dropping the lags of i.
double conditional_index(const LaggedGram& gram, Index i, Index j, const LaggedGram::Fit& full, std::size_t q_full) {
  const auto cols = gram.columns_without(i);
  const auto restricted = gram.fit(j, cols);
  return std::log(dof_variance(restricted.rss, gram.rows(), cols.size()) / dof_variance(full.rss, gram.rows(), q_full));
}

Matrix residual_covariance(const VarModel& model, Index n_eff, Index regressors) {
  return model.residuals.transpose() * model.residuals / static_cast<double>(n_eff - regressors);
}

// M_yy - M_yz M_zz^{-1} M_zy for y = index `y` and z = `z` inside covariance `m`.
double conditional_variance(const Matrix& m, Index y, const std::vector<Index>& z) {
  const auto q = static_cast<Index>(z.size());
  if (q == 0) return m(y, y);
  Matrix zz(q, q);
  Vector zy(q);
  for (Index a = 0; a < q; ++a) {
    zy(a) = m(z[a], y);
    for (Index b = 0; b < q; ++b) zz(a, b) = m(z[a], z[b]);
  }
  Eigen::LLT<Matrix> llt(zz);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
    throw Error(ErrorCode::SingularConditioningBlock, "conditioning block of the residual covariance is singular");
  }
  return m(y, y) - zy.dot(llt.solve(zy));
}

std::vector<Index> all_but(Index k, Index skip) {
  std::vector<Index> out;
  for (Index v = 0; v < k; ++v) {
    if (v != skip) out.push_back(v);
  }
  return out;
}

}  // namespace

double gci(const TimeSeriesSet& ts, Index i, Index j, int p) {
  check_pair(ts, i, j);
  const std::array<Index, 2> cols{std::min(i, j), std::max(i, j)};
  const TimeSeriesSet pair = ts.select(cols);
  const Index ii = i < j ? 0 : 1;
  const Index jj = 1 - ii;
  const LaggedGram gram(pair, p);
  const auto full_cols = gram.columns_without(-1);
  const auto full = gram.fit(jj, full_cols);
  return conditional_index(gram, ii, jj, full, full_cols.size());
}

double cgci(const TimeSeriesSet& ts, Index i, Index j, int p) {
  check_pair(ts, i, j);
  const LaggedGram gram(ts, p);
  const auto full_cols = gram.columns_without(-1);
  const auto full = gram.fit(j, full_cols);
  return conditional_index(gram, i, j, full, full_cols.size());
}

Vector cgci_row(const TimeSeriesSet& ts, Index i, int p) {
  check_pair(ts, i, i == 0 ? 1 : 0);
  const LaggedGram gram(ts, p);
  const auto full_cols = gram.columns_without(-1);
  Vector row = Vector::Constant(ts.k(), kNaN);
  for (Index j = 0; j < ts.k(); ++j) {
    if (j == i) continue;
    row(j) = conditional_index(gram, i, j, gram.fit(j, full_cols), full_cols.size());
  }
  return row;
}

CausalityMatrix gci_matrix(const TimeSeriesSet& ts, int p) {
  auto out = CausalityMatrix::zeros(ts.k(), "GCI(p=" + std::to_string(p) + ")");
  for (Index i = 0; i < ts.k(); ++i) {
    for (Index j = 0; j < ts.k(); ++j) {
      if (i != j) out(i, j) = gci(ts, i, j, p);
    }
  }
  return out;
}

CausalityMatrix cgci_matrix(const TimeSeriesSet& ts, int p) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  const LaggedGram gram(ts, p);
  const auto full_cols = gram.columns_without(-1);
  auto out = CausalityMatrix::zeros(ts.k(), "CGCI(p=" + std::to_string(p) + ")");
  for (Index j = 0; j < ts.k(); ++j) {
    const auto full = gram.fit(j, full_cols);
    for (Index i = 0; i < ts.k(); ++i) {
      if (i != j) out(i, j) = conditional_index(gram, i, j, full, full_cols.size());
    }
  }
  return out;
}

namespace {

struct PgciFull {
  Matrix sigma;
  Index n_eff;
};

PgciFull pgci_full(const TimeSeriesSet& ts, int p) {
  const VarModel full = fit_var_ols(ts, p);
  const Index n_eff = full.residuals.rows();
  return {residual_covariance(full, n_eff, ts.k() * p), n_eff};
}

// Row of PGCI for driver i given the covariance of the full model.
Vector pgci_row_with(const TimeSeriesSet& ts, Index i, int p, const PgciFull& full) {
  const Index k = ts.k();
  const auto kept = all_but(k, i);  // reduced-model column r is variable kept[r]
  const VarModel reduced = fit_var_ols(ts.select(kept), p);
  const Matrix s = residual_covariance(reduced, full.n_eff, (k - 1) * p);

  Vector row = Vector::Constant(k, kNaN);
  for (Index r = 0; r < k - 1; ++r) {
    const Index j = kept[static_cast<std::size_t>(r)];
    std::vector<Index> z_reduced, z_full;
    for (Index c = 0; c < k - 1; ++c) {
      if (c == r) continue;
      z_reduced.push_back(c);
      z_full.push_back(kept[static_cast<std::size_t>(c)]);
    }
    const double num = conditional_variance(s, r, z_reduced);
    const double den = conditional_variance(full.sigma, j, z_full);
    row(j) = std::log(num / den);
  }
  return row;
}

void check_pgci(const TimeSeriesSet& ts) {
  if (ts.k() < 3) throw Error(ErrorCode::KTooSmall, "PGCI needs K >= 3");
}

}  // namespace

double pgci(const TimeSeriesSet& ts, Index i, Index j, int p) {
  check_pgci(ts);
  check_pair(ts, i, j);
  return pgci_row(ts, i, p)(j);
}

Vector pgci_row(const TimeSeriesSet& ts, Index i, int p) {
  check_pgci(ts);
  if (i < 0 || i >= ts.k()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return pgci_row_with(ts, i, p, pgci_full(ts, p));
}

CausalityMatrix pgci_matrix(const TimeSeriesSet& ts, int p) {
  check_pgci(ts);
  const PgciFull full = pgci_full(ts, p);
  auto out = CausalityMatrix::zeros(ts.k(), "PGCI(p=" + std::to_string(p) + ")");
  for (Index i = 0; i < ts.k(); ++i) {
    const Vector row = pgci_row_with(ts, i, p, full);
    for (Index j = 0; j < ts.k(); ++j) {
      if (i != j) out(i, j) = row(j);
    }
  }
  return out;
}

CausalityMatrix rcgci_from(const LaggedGram& gram, const std::vector<LagSet>& selected) {
  const Index k = gram.k();
  auto out = CausalityMatrix::zeros(k, "RCGCI(p=" + std::to_string(gram.order()) + ")");
  for (Index j = 0; j < k; ++j) {
    const auto& terms = selected[static_cast<std::size_t>(j)];
    std::vector<Index> cols;
    for (const auto& t : terms) cols.push_back(gram.column(t.var, t.lag));
    const auto with = gram.fit(j, cols);
    const double s_with = dof_variance(with.rss, gram.rows(), cols.size());
    for (Index i = 0; i < k; ++i) {
      if (i == j) continue;
      std::vector<Index> reduced;
      for (const auto& t : terms) {
        if (t.var != i) reduced.push_back(gram.column(t.var, t.lag));
      }
      if (reduced.size() == cols.size()) continue;  // driver not selected: exactly zero
      const auto without = gram.fit(j, reduced);
      out(i, j) = std::log(dof_variance(without.rss, gram.rows(), reduced.size()) / s_with);
    }
  }
  return out;
}

CausalityMatrix rcgci(const TimeSeriesSet& ts, int p_max) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  const LaggedGram gram(ts, p_max);
  std::vector<LagSet> selected;
  selected.reserve(static_cast<std::size_t>(ts.k()));
  for (Index j = 0; j < ts.k(); ++j) selected.push_back(select_restricted_terms(gram, j));
  return rcgci_from(gram, selected);
}

}  // namespace causnet
