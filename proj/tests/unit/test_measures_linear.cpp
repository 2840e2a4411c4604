#include <doctest.h>

#include <random>

#include "causnet/measures_linear.hpp"
#include "causnet/systems.hpp"
#include "test_support.hpp"

using namespace causnet;

namespace {

// x1 -> x2 -> x3 at lag one.
Matrix linear_chain(int n, unsigned seed) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 0.4;
  a(1, 0) = 0.6;
  a(1, 1) = 0.2;
  a(2, 1) = 0.6;
  a(2, 2) = 0.2;
  return testsupport::simulate_var({a}, n, seed);
}

// x_j(t) = 0.9 x_i(t-1) + e with white x_i of unit variance.
Matrix driven_pair(int n, unsigned seed) {
  Matrix x = testsupport::white_noise(n, 2, seed);
  for (int t = n - 1; t >= 1; --t) x(t, 1) = 0.9 * x(t - 1, 0) + x(t, 1);
  return x;
}

}  // namespace

TEST_CASE("GCI is near zero on independent channels") {
  double acc = 0.0;
  for (unsigned s = 0; s < 10; ++s) acc += std::abs(gci(TimeSeriesSet(testsupport::white_noise(2048, 2, s)), 0, 1, 3));
  CHECK(acc / 10 < 0.01);
}

TEST_CASE("GCI of a lagged linear drive matches the variance ratio") {
  const TimeSeriesSet ts(driven_pair(20000, 5));
  const double g = gci(ts, 0, 1, 1);
  CHECK(g > 0.3);
  CHECK(g == doctest::Approx(std::log(1.81)).epsilon(0.05));
  CHECK(gci(ts, 1, 0, 1) < 0.01);
}

TEST_CASE("CGCI removes an indirect path that GCI reports") {
  const TimeSeriesSet ts(linear_chain(4096, 8));
  CHECK(gci(ts, 0, 2, 2) > 0.05);
  CHECK(std::abs(cgci(ts, 0, 2, 2)) < 0.01);
  CHECK(cgci(ts, 0, 1, 2) > 0.2);
  CHECK(cgci(ts, 1, 2, 2) > 0.2);
}

TEST_CASE("CGCI on independent channels and on K = 2") {
  double acc = 0.0;
  for (unsigned s = 0; s < 10; ++s) acc += std::abs(cgci(TimeSeriesSet(testsupport::white_noise(2048, 4, 50 + s)), 0, 3, 3));
  CHECK(acc / 10 < 0.01);

  for (unsigned s = 0; s < 5; ++s) {
    const TimeSeriesSet ts(driven_pair(700, 70 + s));
    for (int p = 1; p <= 4; ++p) {
      CHECK(std::abs(cgci(ts, 0, 1, p) - gci(ts, 0, 1, p)) < 1e-12);
      CHECK(std::abs(cgci(ts, 1, 0, p) - gci(ts, 1, 0, p)) < 1e-12);
    }
  }
}

TEST_CASE("matrix forms agree with pair forms") {
  const auto r = gen_henon(4, 0.2, 600, 4);
  const auto ts = standardize(r.data);
  const auto g = gci_matrix(ts, 2), c = cgci_matrix(ts, 2), p = pgci_matrix(ts, 2);
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::isnan(g(i, i)));
    const Vector crow = cgci_row(ts, i, 2), prow = pgci_row(ts, i, 2);
    for (Index j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(g(i, j) == doctest::Approx(gci(ts, i, j, 2)).epsilon(1e-10));
      CHECK(c(i, j) == doctest::Approx(cgci(ts, i, j, 2)).epsilon(1e-10));
      CHECK(crow(j) == doctest::Approx(c(i, j)).epsilon(1e-10));
      CHECK(p(i, j) == doctest::Approx(pgci(ts, i, j, 2)).epsilon(1e-10));
      CHECK(prow(j) == doctest::Approx(p(i, j)).epsilon(1e-10));
    }
  }
}

TEST_CASE("PGCI needs a conditioning variable and is null on noise") {
  CHECK_THROWS_AS(pgci(TimeSeriesSet(testsupport::white_noise(500, 2, 1)), 0, 1, 2), Error);
  double acc = 0.0;
  for (unsigned s = 0; s < 10; ++s) acc += std::abs(pgci(TimeSeriesSet(testsupport::white_noise(4096, 3, 90 + s)), 0, 2, 3));
  CHECK(acc / 10 < 0.02);
}

TEST_CASE("PGCI matches conditional residual variances of separately fitted models") {
  // Chain plus a latent AR(1) input z(t-1) shared by every channel.
  Matrix x = linear_chain(4096, 200);
  std::mt19937_64 rng(900);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector zs(4096);
  double z = 0.0;
  for (int t = 0; t < 4096; ++t) zs(t) = z = 0.7 * z + gauss(rng);
  for (int t = 1; t < 4096; ++t) x.row(t).array() += 0.8 * zs(t - 1);
  const TimeSeriesSet ts(x);

  // Least squares with an intercept via QR; covariance of the residuals / rows.
  auto residual_cov = [&](const std::vector<Index>& vars, int p) {
    const Index rows = x.rows() - p;
    Matrix design(rows, 1 + p * static_cast<Index>(vars.size()));
    design.col(0).setOnes();
    Index c = 1;
    for (int l = 1; l <= p; ++l)
      for (Index v : vars) design.col(c++) = x.col(v).segment(p - l, rows);
    Matrix y(rows, vars.size());
    for (std::size_t v = 0; v < vars.size(); ++v) y.col(static_cast<Index>(v)) = x.col(vars[v]).tail(rows);
    const Matrix e = y - design * design.householderQr().solve(y);
    return Matrix(e.transpose() * e / static_cast<double>(rows));
  };
  auto cond = [](const Matrix& s, Index a, Index b) { return s(a, a) - s(a, b) * s(a, b) / s(b, b); };
  const Matrix full = residual_cov({0, 1, 2}, 2), reduced = residual_cov({1, 2}, 2);
  const double oracle = std::log(cond(reduced, 1, 0) / cond(full, 2, 1));
  // Degree-of-freedom scaling differs from the plain 1/rows covariance by O(p K / n).
  CHECK(std::abs(pgci(ts, 0, 2, 2) - oracle) < 2e-3);
  CHECK(oracle > 0.02);
  CHECK(std::abs(cgci(ts, 0, 2, 2)) < 0.01);
}

TEST_CASE("RCGCI is sparse: exact zeros for unselected drivers") {
  int all_zero = 0;
  for (unsigned s = 0; s < 10; ++s) {
    const TimeSeriesSet ts(testsupport::white_noise(1024, 4, 400 + s));
    const auto r = rcgci(ts, 3);
    bool zero = true;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        if (i != j && r(i, j) != 0.0) zero = false;
    all_zero += zero;
  }
  CHECK(all_zero >= 6);

  const auto h = gen_henon(5, 0.2, 1024, 3);
  const auto ts = standardize(h.data);
  const auto rv = fit_restricted_var(ts, 3);
  const auto r = rcgci(ts, 3);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      if (i == j) continue;
      if (!rv.selects(j, i)) CHECK(r(i, j) == 0.0);
      else CHECK(r(i, j) > 0.0);
    }
  }

  const auto pair = rcgci(TimeSeriesSet(driven_pair(1024, 2)), 2);
  CHECK(pair(0, 1) > 0.3);
  CHECK(pair(1, 0) >= 0.0);
}

TEST_CASE("coupled entries survive added noise channels") {
  Matrix x = linear_chain(2048, 31);
  Matrix wide(2048, 6);
  wide << x, testsupport::white_noise(2048, 3, 32);
  const TimeSeriesSet ts(wide);
  CHECK(cgci(ts, 0, 1, 2) > 0.1);
  CHECK(pgci(ts, 1, 2, 2) > 0.1);
  CHECK(rcgci(ts, 3)(1, 2) > 0.1);
}
