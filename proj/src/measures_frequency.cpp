#include "causnet/measures_frequency.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace causnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<BandSpec, 5> kBands{{
    {Band::Delta, "delta", 0.01, 0.08},
    {Band::Theta, "theta", 0.08, 0.16},
    {Band::Alpha, "alpha", 0.16, 0.26},
    {Band::Beta, "beta", 0.26, 0.60},
    {Band::Gamma, "gamma", 0.60, 1.00},
}};

std::string tag(std::string_view measure, int p, Band band) {
  return std::string(measure) + "(p=" + std::to_string(p) + ",band=" + std::string(band_spec(band).name) + ")";
}

}  // namespace

bool BandSpec::contains(double normalized) const noexcept {
  if (upper >= 1.0) return normalized >= lower && normalized <= upper;
  return normalized >= lower && normalized < upper;
}

const BandSpec& band_spec(Band band) { return kBands[static_cast<std::size_t>(band)]; }

const std::array<BandSpec, 5>& all_bands() { return kBands; }

Band parse_band(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "δ") return Band::Delta;
  if (lower == "θ") return Band::Theta;
  if (lower == "α") return Band::Alpha;
  if (lower == "β") return Band::Beta;
  if (lower == "γ") return Band::Gamma;
  for (const auto& b : kBands) {
    if (lower == b.name) return b.band;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown frequency band '" + std::string(name) + "'");
}

double band_aggregate(const Vector& values, const Vector& freqs, const BandSpec& band) {
  if (values.size() != freqs.size()) throw Error(ErrorCode::DimensionMismatch, "values and frequency grid differ in length");
  double sum = 0.0;
  Index count = 0;
  for (Index m = 0; m < freqs.size(); ++m) {
    if (band.contains(freqs(m) / 0.5)) {
      sum += values(m);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyBand, "no grid frequency inside band " + std::string(band.name));
  return sum / static_cast<double>(count);
}

std::string_view to_string(SpectralKind kind) {
  switch (kind) {
    case SpectralKind::PDC: return "PDC";
    case SpectralKind::GPDC: return "GPDC";
    case SpectralKind::DTF: return "DTF";
    case SpectralKind::dDTF: return "dDTF";
  }
  return "?";
}

std::vector<Matrix> spectral_measure_all(const SpectralModel& model, SpectralKind kind) {
  const auto nf = static_cast<std::size_t>(model.size());
  std::vector<Matrix> out(nf);
  if (nf == 0) return out;
  const Index k = model.abar.front().rows();

  switch (kind) {
    case SpectralKind::PDC:
    case SpectralKind::GPDC: {
      Vector w = Vector::Ones(k);
      if (kind == SpectralKind::GPDC) {
        for (Index a = 0; a < k; ++a) {
          const double s2 = model.sigma(a, a);
          if (!(s2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "GPDC needs positive residual variances");
          w(a) = 1.0 / std::sqrt(s2);
        }
      }
      for (std::size_t m = 0; m < nf; ++m) {
        // Matrix(j, i) = |Abar_ji| / sigma_j; normalize each column i.
        const Matrix mag = w.asDiagonal() * model.abar[m].cwiseAbs();
        const Vector norms = mag.colwise().norm().transpose();
        out[m] = (mag * norms.cwiseInverse().asDiagonal()).transpose();
      }
      break;
    }
    case SpectralKind::DTF: {
      for (std::size_t m = 0; m < nf; ++m) {
        const Matrix mag = model.h[m].cwiseAbs();  // (j, i)
        const Vector norms = mag.rowwise().norm();
        out[m] = (norms.cwiseInverse().asDiagonal() * mag).transpose();
      }
      break;
    }
    case SpectralKind::dDTF: {
      Vector total = Vector::Zero(k);  // sum over f and k of |H_jk(f)|^2, per row j
      for (std::size_t m = 0; m < nf; ++m) total += model.h[m].cwiseAbs2().rowwise().sum();
      const Vector inv_norm = total.cwiseSqrt().cwiseInverse();
      for (std::size_t m = 0; m < nf; ++m) {
        Eigen::PartialPivLU<ComplexMatrix> lu(model.s[m]);
        if (!(lu.rcond() > 1e-14)) {
          throw Error(ErrorCode::SingularAtFrequency, "spectral matrix is singular at f=" + std::to_string(model.freqs(static_cast<Index>(m))));
        }
        const ComplexMatrix pinv = lu.inverse();
        Matrix v(k, k);
        for (Index j = 0; j < k; ++j) {
          for (Index i = 0; i < k; ++i) {
            const double eta = std::abs(model.h[m](j, i)) * inv_norm(j);
            const double denom = std::real(pinv(j, j)) * std::real(pinv(i, i));
            const double kappa = denom > 0.0 ? std::min(1.0, std::abs(pinv(j, i)) / std::sqrt(denom)) : 0.0;
            v(i, j) = eta * kappa;
          }
        }
        out[m] = std::move(v);
      }
      break;
    }
  }
  return out;
}

Vector spectral_measure(const SpectralModel& model, SpectralKind kind, Index i, Index j) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "driver and response must differ");
  const auto all = spectral_measure_all(model, kind);
  Vector out(static_cast<Index>(all.size()));
  for (std::size_t m = 0; m < all.size(); ++m) out(static_cast<Index>(m)) = all[m](i, j);
  return out;
}

Matrix band_matrix(const std::vector<Matrix>& per_freq, const Vector& freqs, const BandSpec& band) {
  if (per_freq.empty()) throw Error(ErrorCode::EmptyBand, "empty frequency grid");
  const Index k = per_freq.front().rows();
  Matrix sum = Matrix::Zero(k, k);
  Index count = 0;
  for (Index m = 0; m < freqs.size(); ++m) {
    if (band.contains(freqs(m) / 0.5)) {
      sum += per_freq[static_cast<std::size_t>(m)];
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyBand, "no grid frequency inside band " + std::string(band.name));
  sum /= static_cast<double>(count);
  sum.diagonal().setConstant(kNaN);
  return sum;
}

CausalityMatrix spectral_matrix(const TimeSeriesSet& ts, SpectralKind kind, int p, Band band, int points) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  const SpectralModel model = spectral_transforms(fit_var_ols(ts, p), points);
  return {band_matrix(spectral_measure_all(model, kind), model.freqs, band_spec(band)), tag(to_string(kind), p, band)};
}

CausalityMatrix rgpdc(const TimeSeriesSet& ts, int p_max, Band band, int points) {
  if (ts.k() < 2) throw Error(ErrorCode::KTooSmall, "causality measures need K >= 2");
  const RestrictedVarModel restricted = fit_restricted_var(ts, p_max);
  const SpectralModel model = spectral_transforms(restricted, points);
  Matrix values = band_matrix(spectral_measure_all(model, SpectralKind::GPDC), model.freqs, band_spec(band));
  // Drivers without a selected lag have exactly zero coefficients; pin the entry to 0.
  for (Index j = 0; j < ts.k(); ++j) {
    for (Index i = 0; i < ts.k(); ++i) {
      if (i != j && !restricted.selects(j, i)) values(i, j) = 0.0;
    }
  }
  return {std::move(values), tag("RGPDC", p_max, band)};
}

Vector ggc(const TimeSeriesSet& ts, Index i, Index j, int p, int points) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "driver and response must differ");
  const std::array<Index, 2> cols{i, j};
  const VarModel model = fit_var_ols(ts.select(cols), p);
  const SpectralModel spec = spectral_transforms(model, points);
  const Matrix& sg = model.sigma;
  // Driver is local index 0, response index 1.
  const double partial = sg(0, 0) - sg(0, 1) * sg(0, 1) / sg(1, 1);
  Vector out(spec.size());
  for (Index m = 0; m < spec.size(); ++m) {
    const double sjj = std::real(spec.s[static_cast<std::size_t>(m)](1, 1));
    const double hji2 = std::norm(spec.h[static_cast<std::size_t>(m)](1, 0));
    out(m) = std::log(sjj / std::max(sjj - partial * hji2, std::numeric_limits<double>::min()));
  }
  return out;
}

CausalityMatrix ggc_matrix(const TimeSeriesSet& ts, int p, Band band, int points) {
  auto out = CausalityMatrix::zeros(ts.k(), tag("GGC", p, band));
  const Vector freqs = frequency_grid(points);
  for (Index i = 0; i < ts.k(); ++i) {
    for (Index j = 0; j < ts.k(); ++j) {
      if (i != j) out(i, j) = band_aggregate(ggc(ts, i, j, p, points), freqs, band_spec(band));
    }
  }
  return out;
}

}  // namespace causnet
