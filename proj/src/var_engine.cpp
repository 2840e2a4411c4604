#include "causnet/var_engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace causnet {
namespace {

constexpr double kMinRcond = 1e-12;

void check_order(const TimeSeriesSet& ts, int p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "VAR order must be >= 1");
  if (ts.n() <= ts.k() * p + 10) {
    throw Error(ErrorCode::SeriesTooShort, "need n > K*p + 10 samples for a VAR(" + std::to_string(p) + ")");
  }
}

Matrix sub_gram(const Matrix& g, const std::vector<Index>& cols) {
  const auto q = static_cast<Index>(cols.size());
  Matrix out(q, q);
  for (Index a = 0; a < q; ++a) {
    for (Index b = 0; b < q; ++b) out(a, b) = g(cols[a], cols[b]);
  }
  return out;
}

}  // namespace

LaggedGram::LaggedGram(const TimeSeriesSet& ts, int p) : p_(p), k_(ts.k()) {
  check_order(ts, p);
  const Index rows = ts.n() - p;
  x_.resize(rows, k_ * p);
  for (int lag = 1; lag <= p; ++lag) {
    for (Index v = 0; v < k_; ++v) x_.col(column(static_cast<int>(v), lag)) = ts.data().col(v).segment(p - lag, rows);
  }
  y_ = ts.data().bottomRows(rows);
  g_ = Matrix::Zero(x_.cols(), x_.cols());
  g_.selfadjointView<Eigen::Lower>().rankUpdate(x_.transpose());
  g_ = g_.selfadjointView<Eigen::Lower>();
  xy_ = x_.transpose() * y_;
  yy_ = y_.colwise().squaredNorm().transpose();
}

std::optional<LaggedGram::Fit> LaggedGram::try_fit(Index eq, const std::vector<Index>& cols) const {
  Fit out;
  if (cols.empty()) {
    out.rss = yy_(eq);
    return out;
  }
  const Matrix gs = sub_gram(g_, cols);
  Vector rhs(static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) rhs(static_cast<Index>(c)) = xy_(cols[c], eq);
  Eigen::LLT<Matrix> llt(gs);
  if (llt.info() != Eigen::Success) return std::nullopt;
  out.coef = llt.solve(rhs);
  out.rss = std::max(yy_(eq) - rhs.dot(out.coef), 0.0);
  return out;
}

LaggedGram::Fit LaggedGram::fit(Index eq, const std::vector<Index>& cols) const {
  if (cols.empty()) return *try_fit(eq, cols);
  const Matrix gs = sub_gram(g_, cols);
  Eigen::LLT<Matrix> llt(gs);
  if (llt.info() != Eigen::Success || llt.rcond() < kMinRcond) {
    throw Error(ErrorCode::IllConditioned, "normal equations are numerically singular; VAR order too large for n?");
  }
  Vector rhs(static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) rhs(static_cast<Index>(c)) = xy_(cols[c], eq);
  Fit out;
  out.coef = llt.solve(rhs);
  out.rss = std::max(yy_(eq) - rhs.dot(out.coef), 0.0);
  return out;
}

std::vector<Index> LaggedGram::columns_without(Index excluded) const {
  std::vector<Index> cols;
  cols.reserve(static_cast<std::size_t>(k_ * p_));
  for (int lag = 1; lag <= p_; ++lag) {
    for (Index v = 0; v < k_; ++v) {
      if (v != excluded) cols.push_back(column(static_cast<int>(v), lag));
    }
  }
  return cols;
}

VarModel fit_var_ols(const TimeSeriesSet& ts, int p, const std::optional<std::vector<Index>>& equations) {
  const LaggedGram lg(ts, p);
  const Index k = ts.k();
  const Index regressors = k * p;

  Eigen::LLT<Matrix> llt(lg.gram());
  if (llt.info() != Eigen::Success || llt.rcond() < kMinRcond) {
    throw Error(ErrorCode::IllConditioned, "normal equations are numerically singular; VAR order too large for n?");
  }

  std::vector<Index> eqs;
  if (equations) {
    eqs = *equations;
  } else {
    for (Index j = 0; j < k; ++j) eqs.push_back(j);
  }

  Matrix rhs(regressors, static_cast<Index>(eqs.size()));
  for (std::size_t e = 0; e < eqs.size(); ++e) rhs.col(static_cast<Index>(e)) = lg.cross().col(eqs[e]);
  const Matrix b = llt.solve(rhs);  // regressors x |eqs|

  VarModel model;
  model.order = p;
  model.coefficients.assign(static_cast<std::size_t>(p), Matrix::Zero(k, k));
  model.residuals = Matrix::Zero(lg.rows(), k);
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    const Index j = eqs[e];
    for (int lag = 1; lag <= p; ++lag) {
      for (Index v = 0; v < k; ++v) {
        model.coefficients[static_cast<std::size_t>(lag - 1)](j, v) = b(lg.column(static_cast<int>(v), lag), static_cast<Index>(e));
      }
    }
    model.residuals.col(j) = lg.responses().col(j) - lg.design() * b.col(static_cast<Index>(e));
  }
  const double dof = static_cast<double>(lg.rows() - regressors);
  model.sigma = (model.residuals.transpose() * model.residuals) / dof;
  if (equations) {
    std::vector<bool> fitted(static_cast<std::size_t>(k), false);
    for (auto j : eqs) fitted[static_cast<std::size_t>(j)] = true;
    for (Index j = 0; j < k; ++j) {
      if (!fitted[static_cast<std::size_t>(j)]) {
        model.sigma.row(j).setConstant(std::numeric_limits<double>::quiet_NaN());
        model.sigma.col(j).setConstant(std::numeric_limits<double>::quiet_NaN());
      }
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Restricted VAR

bool RestrictedVarModel::selects(Index eq, Index var) const {
  for (const auto& term : selected[static_cast<std::size_t>(eq)]) {
    if (term.var == var) return true;
  }
  return false;
}

VarModel RestrictedVarModel::as_var_model() const {
  const Index kk = k();
  VarModel model;
  model.order = max_order;
  model.coefficients.assign(static_cast<std::size_t>(max_order), Matrix::Zero(kk, kk));
  for (Index j = 0; j < kk; ++j) {
    const auto& terms = selected[static_cast<std::size_t>(j)];
    const auto& c = coefs[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t < terms.size(); ++t) {
      model.coefficients[static_cast<std::size_t>(terms[t].lag - 1)](j, terms[t].var) = c(static_cast<Index>(t));
    }
  }
  model.residuals = residuals;
  model.sigma = Matrix(kk, kk);
  for (Index a = 0; a < kk; ++a) {
    for (Index b = 0; b < kk; ++b) {
      const double da = static_cast<double>(n_eff) - static_cast<double>(selected[static_cast<std::size_t>(a)].size());
      const double db = static_cast<double>(n_eff) - static_cast<double>(selected[static_cast<std::size_t>(b)].size());
      model.sigma(a, b) = residuals.col(a).dot(residuals.col(b)) / std::sqrt(da * db);
    }
  }
  return model;
}

LagSet select_restricted_terms(const LaggedGram& gram, Index eq) {
  const Index k = gram.k();
  const int p_max = gram.order();
  const double n = static_cast<double>(gram.rows());
  const double log_n = std::log(n);

  auto bic = [&](double rss, std::size_t q) {
    return n * std::log(std::max(rss, 1e-300) / n) + static_cast<double>(q) * log_n;
  };

  LagSet chosen;
  std::vector<Index> cols;
  // Terms of one variable enter in time order: the next one lies deeper in
  // the past than the last selected term of that variable (gaps allowed).
  std::vector<int> next_lag(static_cast<std::size_t>(k), 1);
  double current = bic(gram.try_fit(eq, cols)->rss, 0);

  while (true) {
    double best = current;
    Index best_var = -1;
    int best_lag = 0;
    for (Index v = 0; v < k; ++v) {
      for (int lag = next_lag[static_cast<std::size_t>(v)]; lag <= p_max; ++lag) {
        cols.push_back(gram.column(static_cast<int>(v), lag));
        const auto fit = gram.try_fit(eq, cols);
        cols.pop_back();
        if (!fit) continue;
        const double score = bic(fit->rss, cols.size() + 1);
        // Strict improvement keeps the lowest variable, then the lowest lag, on ties.
        if (score < best) {
          best = score;
          best_var = v;
          best_lag = lag;
        }
      }
    }
    if (best_var < 0) break;
    next_lag[static_cast<std::size_t>(best_var)] = best_lag + 1;
    chosen.push_back({static_cast<int>(best_var), best_lag});
    cols.push_back(gram.column(static_cast<int>(best_var), best_lag));
    current = best;
  }
  return chosen;
}

RestrictedVarModel fit_restricted_var(const TimeSeriesSet& ts, int p_max, const std::vector<Index>& equations) {
  const LaggedGram lg(ts, p_max);
  const Index k = ts.k();
  RestrictedVarModel model;
  model.max_order = p_max;
  model.n_eff = lg.rows();
  model.selected.assign(static_cast<std::size_t>(k), {});
  model.coefs.assign(static_cast<std::size_t>(k), Vector());
  model.rss = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
  model.residual_variances = model.rss;
  model.residuals = Matrix::Zero(lg.rows(), k);

  for (Index j : equations) {
    auto terms = select_restricted_terms(lg, j);
    std::vector<Index> cols;
    for (const auto& t : terms) cols.push_back(lg.column(t.var, t.lag));
    const auto fit = lg.try_fit(j, cols);
    Vector coef = fit ? fit->coef : Vector::Zero(static_cast<Index>(cols.size()));
    Vector resid = lg.responses().col(j);
    for (std::size_t c = 0; c < cols.size(); ++c) resid -= coef(static_cast<Index>(c)) * lg.design().col(cols[c]);
    model.residuals.col(j) = resid;
    model.rss(j) = resid.squaredNorm();
    model.residual_variances(j) = model.rss(j) / static_cast<double>(model.n_eff - static_cast<Index>(cols.size()));
    model.selected[static_cast<std::size_t>(j)] = std::move(terms);
    model.coefs[static_cast<std::size_t>(j)] = std::move(coef);
  }
  return model;
}

RestrictedVarModel fit_restricted_var(const TimeSeriesSet& ts, int p_max) {
  std::vector<Index> all(static_cast<std::size_t>(ts.k()));
  for (Index j = 0; j < ts.k(); ++j) all[static_cast<std::size_t>(j)] = j;
  return fit_restricted_var(ts, p_max, all);
}

// ---------------------------------------------------------------------------
// Frequency domain

Vector frequency_grid(int points) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "frequency grid needs at least one point");
  Vector f(points);
  for (int m = 1; m <= points; ++m) f(m - 1) = 0.5 * static_cast<double>(m) / static_cast<double>(points);
  return f;
}

SpectralModel spectral_transforms(const VarModel& model, int points) {
  const Index k = model.k();
  SpectralModel out;
  out.freqs = frequency_grid(points);
  out.sigma = model.sigma;
  out.stable = model.coefficients.empty() || spectral_radius(model.coefficients) < 1.0;
  out.abar.reserve(static_cast<std::size_t>(points));
  out.h.reserve(static_cast<std::size_t>(points));
  out.s.reserve(static_cast<std::size_t>(points));
  const ComplexMatrix sigma = model.sigma.cast<Complex>();
  for (Index m = 0; m < out.freqs.size(); ++m) {
    ComplexMatrix a = ComplexMatrix::Identity(k, k);
    for (std::size_t lag = 0; lag < model.coefficients.size(); ++lag) {
      const double w = -2.0 * std::numbers::pi * out.freqs(m) * static_cast<double>(lag + 1);
      a -= model.coefficients[lag].cast<Complex>() * Complex(std::cos(w), std::sin(w));
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    if (!(lu.rcond() > 1e-14)) {
      throw Error(ErrorCode::SingularAtFrequency, "I - A(f) is singular at f=" + std::to_string(out.freqs(m)));
    }
    ComplexMatrix h = lu.inverse();
    out.s.push_back(h * sigma * h.adjoint());
    out.h.push_back(std::move(h));
    out.abar.push_back(std::move(a));
  }
  return out;
}

SpectralModel spectral_transforms(const RestrictedVarModel& model, int points) {
  return spectral_transforms(model.as_var_model(), points);
}

Matrix companion_matrix(const std::vector<Matrix>& coefficients) {
  if (coefficients.empty()) return Matrix(0, 0);
  const Index k = coefficients.front().rows();
  const auto p = static_cast<Index>(coefficients.size());
  Matrix c = Matrix::Zero(k * p, k * p);
  for (Index lag = 0; lag < p; ++lag) c.block(0, lag * k, k, k) = coefficients[static_cast<std::size_t>(lag)];
  if (p > 1) c.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
  return c;
}

double spectral_radius(const std::vector<Matrix>& coefficients) {
  if (coefficients.empty()) return 0.0;
  Eigen::EigenSolver<Matrix> es(companion_matrix(coefficients), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const VarModel& model) { return spectral_radius(model.coefficients) < 1.0; }

}  // namespace causnet
