#pragma once

#include <array>
#include <string>
#include <string_view>

#include "causnet/core_data.hpp"
#include "causnet/networks.hpp"
#include "causnet/var_engine.hpp"

namespace causnet {

enum class Band { Delta, Theta, Alpha, Beta, Gamma };

/// Edges are fractions of the Nyquist frequency. The last band is closed at 1.
struct BandSpec {
  Band band = Band::Alpha;
  std::string_view name;
  double lower = 0.0;
  double upper = 1.0;

  bool contains(double normalized) const noexcept;
};

const BandSpec& band_spec(Band band);
const std::array<BandSpec, 5>& all_bands();
/// Accepts "delta", "theta", "alpha", "beta", "gamma" (any case) and the Greek letters.
Band parse_band(std::string_view name);

/// Mean of `values` over grid frequencies (cycles/sample) inside the band.
double band_aggregate(const Vector& values, const Vector& freqs, const BandSpec& band);

enum class SpectralKind { PDC, GPDC, DTF, dDTF };
std::string_view to_string(SpectralKind kind);

/// values[m](i, j) = measure i -> j at freqs(m); diagonal entries are the
/// self terms of the normalization (kept, not NaN).
std::vector<Matrix> spectral_measure_all(const SpectralModel& model, SpectralKind kind);
/// Per-frequency values of a single pair.
Vector spectral_measure(const SpectralModel& model, SpectralKind kind, Index i, Index j);

/// Band means of a per-frequency family, NaN diagonal.
Matrix band_matrix(const std::vector<Matrix>& per_freq, const Vector& freqs, const BandSpec& band);

CausalityMatrix spectral_matrix(const TimeSeriesSet& ts, SpectralKind kind, int p, Band band,
                                int points = kDefaultFrequencyPoints);
/// GPDC on the restricted VAR (zeros at unselected terms).
CausalityMatrix rgpdc(const TimeSeriesSet& ts, int p_max, Band band, int points = kDefaultFrequencyPoints);

/// Bivariate spectral Granger causality i -> j per grid frequency.
Vector ggc(const TimeSeriesSet& ts, Index i, Index j, int p, int points = kDefaultFrequencyPoints);
CausalityMatrix ggc_matrix(const TimeSeriesSet& ts, int p, Band band, int points = kDefaultFrequencyPoints);

}  // namespace causnet
