#include <doctest.h>

#include <sstream>

#include "causnet/core_data.hpp"
#include "causnet/io.hpp"
#include "causnet/networks.hpp"
#include "test_support.hpp"

using namespace causnet;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("time series set rejects non-finite and short input") {
  Matrix m(3, 2);
  m << 1, 2, 3, 4, 5, std::nan("");
  CHECK(code_of([&] { TimeSeriesSet ts(m); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { TimeSeriesSet ts(Matrix::Ones(1, 2)); }) == ErrorCode::SeriesTooShort);
  Matrix ok(3, 2);
  ok << 1, 2, 3, 4, 5, 7;
  TimeSeriesSet ts(ok);
  CHECK(ts.n() == 3);
  CHECK(ts.k() == 2);
  CHECK(ts.labels().size() == 2);
}

TEST_CASE("select and with_column keep node order") {
  Matrix m(4, 3);
  m << 1, 10, 100, 2, 20, 200, 3, 30, 300, 4, 40, 400;
  TimeSeriesSet ts(m);
  const std::vector<Index> cols{2, 0};
  const auto s = ts.select(cols);
  CHECK(s.k() == 2);
  CHECK(s.data()(1, 0) == 200);
  CHECK(s.data()(1, 1) == 2);
  Vector repl = Vector::Constant(4, -1.0);
  const auto w = ts.with_column(1, repl);
  CHECK(w.data()(2, 1) == -1.0);
  CHECK(w.data()(2, 2) == 300);
  CHECK(code_of([&] { ts.with_column(0, Vector::Zero(3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("standardize: zero mean, unit variance, idempotent") {
  Matrix m(3, 1);
  m << 1, 2, 3;
  const auto z = standardize(TimeSeriesSet(m));
  CHECK(z.data().col(0).mean() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(z.data().col(0).squaredNorm() / 2.0 == doctest::Approx(1.0));

  const auto x = TimeSeriesSet(testsupport::white_noise(200, 3, 7) * 3.0 + Matrix::Constant(200, 3, 5.0));
  const auto once = standardize(x);
  const auto twice = standardize(once);
  CHECK((once.data() - twice.data()).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(code_of([] { standardize(TimeSeriesSet(Matrix::Constant(5, 1, 5.0))); }) == ErrorCode::ConstantChannel);
}

TEST_CASE("delay embedding rows") {
  Vector x(4);
  x << 1, 2, 3, 4;
  const Matrix e = delay_embed(x, {2, 1});
  REQUIRE(e.rows() == 3);
  CHECK(e(0, 0) == 2);
  CHECK(e(0, 1) == 1);
  CHECK(e(2, 0) == 4);
  CHECK(e(2, 1) == 3);

  const Matrix id = delay_embed(x, {1, 1});
  CHECK(id.rows() == 4);
  CHECK(id.col(0) == x);

  Vector y(5);
  y << 1, 2, 3, 4, 5;
  const Matrix one = delay_embed(y, {3, 2});
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == 5);
  CHECK(one(0, 1) == 3);
  CHECK(one(0, 2) == 1);

  CHECK(code_of([&] { delay_embed(y, {4, 2}); }) == ErrorCode::SeriesTooShort);
}

TEST_CASE("delay embedding row count property") {
  for (int n = 5; n <= 40; n += 7) {
    for (int m = 1; m <= 4; ++m) {
      for (int tau = 1; tau <= 3; ++tau) {
        if ((m - 1) * tau >= n) continue;
        const Vector x = Vector::LinSpaced(n, 0.0, 1.0);
        CHECK(delay_embed(x, {m, tau}).rows() == n - (m - 1) * tau);
      }
    }
  }
}

TEST_CASE("lagged design alignment") {
  Matrix m(3, 1);
  m << 1, 2, 3;
  TimeSeriesSet ts(m);
  const auto d = lagged_design(ts, {{0, 1}}, 0);
  REQUIRE(d.predictors.rows() == 2);
  CHECK(d.predictors(0, 0) == 1);
  CHECK(d.predictors(1, 0) == 2);
  CHECK(d.response(0) == 2);
  CHECK(d.response(1) == 3);

  const auto null = lagged_design(ts, {}, 0);
  CHECK(null.predictors.cols() == 0);
  CHECK(null.response.size() == 3);

  CHECK(code_of([&] { lagged_design(ts, {{0, 3}}, 0); }) == ErrorCode::SeriesTooShort);
  CHECK(code_of([&] { lagged_design(ts, {{0, 1}, {0, 1}}, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lagged design row count ignores term order") {
  const TimeSeriesSet ts(testsupport::white_noise(50, 3, 1));
  const LagSet a{{0, 1}, {2, 4}, {1, 2}};
  const LagSet b{{1, 2}, {0, 1}, {2, 4}};
  CHECK(lagged_design(ts, a, 1).predictors.rows() == 46);
  CHECK(lagged_design(ts, b, 1).predictors.rows() == 46);
}

TEST_CASE("matrix and adjacency files round trip") {
  Matrix r(3, 3);
  r << kDiagonal, 0.5, -1.25, 2, kDiagonal, 1e-9, 3, 4, kDiagonal;
  std::stringstream ss;
  io::write_matrix(ss, r);
  const Matrix back = io::read_matrix(ss);
  REQUIRE(back.rows() == 3);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      if (i == j) CHECK(std::isnan(back(i, j)));
      else CHECK(back(i, j) == r(i, j));
    }
  }

  auto net = AdjacencyNetwork::empty(4);
  net.set_edge(0, 1, true);
  net.set_edge(3, 2, true);
  std::stringstream as;
  io::write_adjacency(as, net);
  const auto net2 = io::read_adjacency(as);
  CHECK(net2 == net);
  CHECK(net2.edge_count() == 2);
}

TEST_CASE("time series files accept a label header") {
  std::stringstream ss("a,b\n1,2\n3,4\n5,7\n");
  const auto ts = io::read_time_series(ss);
  CHECK(ts.n() == 3);
  CHECK(ts.labels()[1] == "b");
  CHECK(ts.data()(2, 1) == 7);
}
