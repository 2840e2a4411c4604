#include <doctest.h>

#include <complex>

#include "causnet/systems.hpp"
#include "causnet/var_engine.hpp"
#include "test_support.hpp"

using namespace causnet;

namespace {

VarModel model_of(std::vector<Matrix> a, Matrix sigma) {
  VarModel m;
  m.order = static_cast<int>(a.size());
  m.coefficients = std::move(a);
  m.sigma = std::move(sigma);
  return m;
}

}  // namespace

TEST_CASE("OLS recovers a known VAR(1)") {
  Matrix a(3, 3);
  a << 0.5, 0.0, 0.0,
       0.4, 0.3, 0.0,
       0.0, -0.3, 0.4;
  const TimeSeriesSet ts(testsupport::simulate_var({a}, 10000, 21));
  const auto fit = fit_var_ols(ts, 1);
  CHECK((fit.coefficients[0] - a).cwiseAbs().maxCoeff() < 0.03);
  CHECK(fit.sigma.diagonal().minCoeff() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("OLS on white noise: coefficients inside three standard errors") {
  int inside = 0, total = 0;
  for (unsigned s = 0; s < 5; ++s) {
    const TimeSeriesSet ts(testsupport::white_noise(2000, 3, 100 + s));
    const auto fit = fit_var_ols(ts, 2);
    const double se = 1.0 / std::sqrt(2000.0 - 2);
    for (const auto& a : fit.coefficients) {
      inside += static_cast<int>((a.array().abs() < 3 * se).count());
      total += static_cast<int>(a.size());
    }
  }
  CHECK(static_cast<double>(inside) / total >= 0.95);
}

TEST_CASE("OLS rejects orders the sample cannot support") {
  const TimeSeriesSet ts(testsupport::white_noise(40, 5, 3));
  CHECK_THROWS_AS(fit_var_ols(ts, 10), Error);
  try {
    fit_var_ols(ts, 10);
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::IllConditioned || e.code() == ErrorCode::SeriesTooShort));
  }
}

TEST_CASE("OLS residuals are orthogonal to the regressors") {
  const auto r = gen_henon(4, 0.2, 800, 2);
  const auto ts = standardize(r.data);
  const auto fit = fit_var_ols(ts, 3);
  const LaggedGram g(ts, 3);
  CHECK((g.design().transpose() * fit.residuals).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("restricted selection finds a single lagged driver") {
  Matrix a = Matrix::Zero(3, 3);
  a(1, 0) = 0.5;
  a(0, 0) = 0.3;
  int hits = 0;
  for (unsigned s = 0; s < 10; ++s) {
    const TimeSeriesSet ts(testsupport::simulate_var({a}, 2048, 300 + s));
    const auto rv = fit_restricted_var(ts, 3);
    const auto& sel = rv.selected[1];
    hits += std::find(sel.begin(), sel.end(), LagTerm{0, 1}) != sel.end();
  }
  CHECK(hits >= 9);
}

TEST_CASE("restricted selection stays sparse on white noise") {
  double terms = 0.0;
  int eqs = 0;
  for (unsigned s = 0; s < 5; ++s) {
    const TimeSeriesSet ts(testsupport::white_noise(1024, 4, 40 + s));
    const auto rv = fit_restricted_var(ts, 3);
    for (const auto& sel : rv.selected) terms += static_cast<double>(sel.size()), ++eqs;
  }
  CHECK(terms / eqs < 1.0);
}

TEST_CASE("restricted selection keeps both drivers of a linear chain node") {
  // x1 -> x2 at lag 1 and x3 -> x2 at lag 2; x0 drives nothing.
  Matrix a1 = Matrix::Zero(4, 4), a2 = Matrix::Zero(4, 4);
  a1.diagonal().setConstant(0.3);
  a1(2, 1) = 0.35;
  a2(2, 3) = -0.35;
  int hits = 0;
  for (unsigned s = 0; s < 10; ++s) {
    const TimeSeriesSet ts(testsupport::simulate_var({a1, a2}, 1024, 700 + s));
    const auto rv = fit_restricted_var(ts, 5);
    const auto& sel = rv.selected[2];
    auto has = [&](int var) { return std::any_of(sel.begin(), sel.end(), [&](const LagTerm& t) { return t.var == var; }); };
    hits += has(1) && has(3) && !has(0);
  }
  CHECK(hits >= 8);
}

TEST_CASE("refitting the selected terms reproduces the residual variances") {
  const auto r = gen_henon(4, 0.2, 1000, 7);
  const auto ts = standardize(r.data);
  const auto rv = fit_restricted_var(ts, 4);
  const LaggedGram g(ts, 4);
  for (Index eq = 0; eq < 4; ++eq) {
    std::vector<Index> cols;
    for (const auto& t : rv.selected[static_cast<std::size_t>(eq)]) cols.push_back(g.column(t.var, t.lag));
    const auto fit = g.fit(eq, cols);
    const double var = fit.rss / static_cast<double>(g.rows() - static_cast<Index>(cols.size()));
    CHECK(var == doctest::Approx(rv.residual_variances(eq)).epsilon(1e-10));
  }
}

TEST_CASE("spectral transforms: identity model") {
  Matrix sigma(2, 2);
  sigma << 2.0, 0.3, 0.3, 1.0;
  const auto sm = spectral_transforms(model_of({Matrix::Zero(2, 2)}, sigma), 16);
  for (Index m = 0; m < sm.size(); ++m) {
    CHECK((sm.abar[m] - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((sm.h[m] - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((sm.s[m] - sigma.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("spectral transforms: decoupled, inverse and Hermitian") {
  Matrix d(2, 2);
  d << 0.5, 0.0, 0.0, -0.3;
  const auto dm = spectral_transforms(model_of({d}, Matrix::Identity(2, 2)), 32);
  for (Index m = 0; m < dm.size(); ++m) {
    CHECK(std::abs(dm.abar[m](0, 1)) == 0.0);
    CHECK(std::abs(dm.h[m](1, 0)) < 1e-15);
  }

  Matrix a1(3, 3), a2(3, 3);
  a1 << 0.4, 0.1, 0.0, 0.3, 0.2, -0.2, 0.0, 0.25, 0.3;
  a2 << -0.2, 0.0, 0.1, 0.0, 0.1, 0.0, 0.1, 0.0, -0.1;
  Matrix sigma(3, 3);
  sigma << 1.0, 0.2, 0.0, 0.2, 1.5, 0.1, 0.0, 0.1, 0.7;
  const auto sm = spectral_transforms(model_of({a1, a2}, sigma), 64);
  CHECK(sm.freqs(0) == doctest::Approx(0.5 / 64));
  CHECK(sm.freqs(63) == doctest::Approx(0.5));
  for (Index m = 0; m < sm.size(); ++m) {
    CHECK((sm.abar[m] * sm.h[m] - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((sm.s[m] - sm.s[m].adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stability via the companion matrix") {
  CHECK(is_stable(model_of({0.5 * Matrix::Identity(3, 3)}, Matrix::Identity(3, 3))));
  CHECK_FALSE(is_stable(model_of({Matrix::Identity(3, 3)}, Matrix::Identity(3, 3))));
  const Matrix c = companion_matrix({Matrix::Ones(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2)});
  CHECK(c.rows() == 6);
  CHECK(spectral_radius({0.5 * Matrix::Identity(3, 3)}) == doctest::Approx(0.5));
  SparseVarSpec spec;
  CHECK(is_stable(build_sparse_var_model(spec)));
}
