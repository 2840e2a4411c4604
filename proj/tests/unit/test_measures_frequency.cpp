#include <doctest.h>

#include <complex>

#include "causnet/measures_frequency.hpp"
#include "causnet/measures_linear.hpp"
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

VarModel three_var_model(double noise_scale_2 = 1.0) {
  Matrix a1(3, 3), a2(3, 3);
  a1 << 0.5, 0.0, 0.2, 0.4, 0.3, 0.0, 0.0, -0.35, 0.2;
  a2 << -0.2, 0.0, 0.0, 0.1, -0.1, 0.0, 0.0, 0.2, 0.1;
  Matrix sigma = Matrix::Identity(3, 3);
  sigma(2, 2) = noise_scale_2;
  return model_of({a1, a2}, sigma);
}

}  // namespace

TEST_CASE("PDC closed form for a two-variable VAR(1)") {
  Matrix a(2, 2);
  a << 0.5, 0.0, 0.4, 0.5;
  const auto sm = spectral_transforms(model_of({a}, Matrix::Identity(2, 2)), 128);
  const Vector pdc12 = spectral_measure(sm, SpectralKind::PDC, 0, 1);
  for (Index m = 0; m < sm.size(); ++m) {
    const double f = sm.freqs(m);
    const std::complex<double> z = std::polar(1.0, -2.0 * M_PI * f);
    const double num = std::abs(0.4 * z);
    const double expected = num / std::sqrt(num * num + std::norm(1.0 - 0.5 * z));
    CHECK(pdc12(m) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(sm.freqs(63) == doctest::Approx(0.25));
  CHECK(std::abs(pdc12(63) - 0.4 / std::sqrt(0.16 + 1.25)) < 1e-10);
  CHECK(std::round(pdc12(63) * 1000) == 337);
  // No path 2 -> 1.
  CHECK(spectral_measure(sm, SpectralKind::PDC, 1, 0).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("decoupled model has zero off-diagonal PDC") {
  Matrix d(3, 3);
  d << 0.5, 0, 0, 0, -0.2, 0, 0, 0, 0.7;
  const auto sm = spectral_transforms(model_of({d}, Matrix::Identity(3, 3)), 64);
  for (const auto& m : spectral_measure_all(sm, SpectralKind::PDC)) {
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        if (i != j) CHECK(m(i, j) == 0.0);
  }
}

TEST_CASE("normalizations and ranges") {
  const auto sm = spectral_transforms(three_var_model(2.0), 128);
  const auto pdc = spectral_measure_all(sm, SpectralKind::PDC);
  const auto gpdc = spectral_measure_all(sm, SpectralKind::GPDC);
  const auto dtf = spectral_measure_all(sm, SpectralKind::DTF);
  const auto ddtf = spectral_measure_all(sm, SpectralKind::dDTF);
  for (std::size_t m = 0; m < pdc.size(); ++m) {
    for (Index i = 0; i < 3; ++i) {
      CHECK(pdc[m].row(i).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));   // over targets of driver i
      CHECK(gpdc[m].row(i).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(dtf[m].col(i).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));   // over drivers of response i
    }
    for (const auto* fam : {&pdc, &gpdc, &dtf, &ddtf}) {
      CHECK((*fam)[m].minCoeff() >= 0.0);
      CHECK((*fam)[m].maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("GPDC equals PDC under equal noise variances") {
  auto model = three_var_model();
  model.sigma *= 3.7;
  const auto sm = spectral_transforms(model, 64);
  const auto pdc = spectral_measure_all(sm, SpectralKind::PDC);
  const auto gpdc = spectral_measure_all(sm, SpectralKind::GPDC);
  for (std::size_t m = 0; m < pdc.size(); ++m) CHECK((pdc[m] - gpdc[m]).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("RGPDC equals GPDC when every term is selected") {
  Matrix a(2, 2);
  a << 0.5, 0.4, -0.45, 0.3;
  const TimeSeriesSet ts(testsupport::simulate_var({a}, 6000, 17));
  const auto rv = fit_restricted_var(ts, 1);
  REQUIRE(rv.selected[0].size() == 2);
  REQUIRE(rv.selected[1].size() == 2);
  for (Band b : {Band::Delta, Band::Alpha, Band::Gamma}) {
    const auto r = rgpdc(ts, 1, b);
    const auto g = spectral_matrix(ts, SpectralKind::GPDC, 1, b);
    CHECK(std::abs(r(0, 1) - g(0, 1)) < 1e-10);
    CHECK(std::abs(r(1, 0) - g(1, 0)) < 1e-10);
  }
}

TEST_CASE("RGPDC is exactly zero for unselected drivers") {
  const TimeSeriesSet ts(testsupport::white_noise(1024, 4, 12));
  const auto rv = fit_restricted_var(ts, 3);
  const auto r = rgpdc(ts, 3, Band::Alpha);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (i != j && !rv.selects(j, i)) CHECK(r(i, j) == 0.0);
}

TEST_CASE("bands on the default grid") {
  const Vector f = frequency_grid(128);
  CHECK(band_aggregate(Vector::Constant(128, 0.37), f, band_spec(Band::Beta)) == doctest::Approx(0.37));
  CHECK(band_spec(Band::Gamma).contains(1.0));
  CHECK_FALSE(band_spec(Band::Beta).contains(0.60));
  // delta: f / 0.5 in [0.01, 0.08) -> grid points m = 2..10
  Vector idx(128);
  for (int m = 0; m < 128; ++m) idx(m) = m + 1;
  CHECK(band_aggregate(idx, f, band_spec(Band::Delta)) == doctest::Approx(6.0));
  // gamma includes the Nyquist point m = 128
  CHECK(band_aggregate(idx, f, band_spec(Band::Gamma)) == doctest::Approx((77 + 128) / 2.0));
  CHECK_THROWS_AS(band_aggregate(Vector::Ones(4), frequency_grid(4), band_spec(Band::Delta)), Error);

  CHECK(parse_band("alpha") == Band::Alpha);
  CHECK(parse_band("BETA") == Band::Beta);
  CHECK(parse_band("γ") == Band::Gamma);
  CHECK_THROWS_AS(parse_band("omega"), Error);

  double covered = 0.0;
  for (const auto& b : all_bands()) covered += b.upper - b.lower;
  CHECK(covered == doctest::Approx(0.99));
}

TEST_CASE("GGC: null, direction, and the time-domain total") {
  double acc = 0.0;
  for (unsigned s = 0; s < 5; ++s) acc += ggc(TimeSeriesSet(testsupport::white_noise(4096, 2, 60 + s)), 0, 1, 3).mean();
  CHECK(acc / 5 < 0.02);

  Matrix a(2, 2);
  a << 0.5, 0.0, 0.5, 0.3;
  const TimeSeriesSet ts(testsupport::simulate_var({a}, 8192, 3));
  const Vector fwd = ggc(ts, 0, 1, 2, 256), back = ggc(ts, 1, 0, 2, 256);
  CHECK(fwd.mean() > 0.1);
  CHECK(back.mean() < 0.01);
  const double time_domain = gci(ts, 0, 1, 2);
  CHECK(std::abs(fwd.mean() - time_domain) < 0.2 * time_domain);
}

TEST_CASE("spectral matrices recover a unidirectional pair") {
  Matrix a(3, 3);
  a << 0.5, 0, 0, 0.5, 0.3, 0, 0, 0, 0.4;
  const TimeSeriesSet ts(testsupport::simulate_var({a}, 4096, 8));
  for (auto kind : {SpectralKind::PDC, SpectralKind::GPDC, SpectralKind::DTF, SpectralKind::dDTF}) {
    const auto r = spectral_matrix(ts, kind, 2, Band::Delta);
    CHECK(std::isnan(r(0, 0)));
    // dDTF is normalized over all frequencies, so compare against the spurious entries.
    CHECK(r(0, 1) > 5 * std::max({r(1, 0), r(2, 1), r(0, 2)}));
  }
}
