#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "causnet/core_data.hpp"

namespace causnet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// x_t = sum_k A_k x_{t-k} + e_t with A_k(j, i) the effect of x_i(t-k) on x_j(t).
struct VarModel {
  int order = 0;
  std::vector<Matrix> coefficients;  // A_1..A_p, each K x K
  Matrix sigma;                      // residual covariance, K x K
  Matrix residuals;                  // n_eff x K

  Index k() const noexcept { return sigma.rows(); }
  Vector residual_variances() const { return sigma.diagonal(); }
};

/// Lag-major regression design over all K variables for lags 1..p, shared
/// by every equation, with its Gram matrix. Rows are t = p..n-1.
class LaggedGram {
 public:
  LaggedGram(const TimeSeriesSet& ts, int p);

  int order() const noexcept { return p_; }
  Index k() const noexcept { return k_; }
  Index rows() const noexcept { return x_.rows(); }
  Index column(int var, int lag) const noexcept { return static_cast<Index>(lag - 1) * k_ + var; }

  const Matrix& design() const noexcept { return x_; }
  const Matrix& responses() const noexcept { return y_; }
  const Matrix& gram() const noexcept { return g_; }
  const Matrix& cross() const noexcept { return xy_; }

  struct Fit {
    Vector coef;
    double rss = 0.0;
  };
  /// Least squares of equation `eq` on the given design columns. Throws
  /// IllConditioned when the normal equations are numerically singular.
  Fit fit(Index eq, const std::vector<Index>& cols) const;
  /// Same, skipping the conditioning check; returns nullopt if not positive definite.
  std::optional<Fit> try_fit(Index eq, const std::vector<Index>& cols) const;

  /// All columns belonging to variables other than `excluded` (or all when -1).
  std::vector<Index> columns_without(Index excluded) const;

 private:
  int p_;
  Index k_;
  Matrix x_, y_, g_, xy_;
  Vector yy_;
};

/// OLS fit of a VAR(p). When `equations` is given, only those rows of A_k
/// are estimated; other rows stay zero and their sigma entries are NaN.
VarModel fit_var_ols(const TimeSeriesSet& ts, int p, const std::optional<std::vector<Index>>& equations = {});

struct RestrictedVarModel {
  int max_order = 0;
  Index n_eff = 0;
  std::vector<LagSet> selected;  // per response equation, in selection order
  std::vector<Vector> coefs;     // aligned with `selected`
  Vector rss;
  Vector residual_variances;  // rss / (n_eff - q_j)
  Matrix residuals;           // n_eff x K

  Index k() const noexcept { return static_cast<Index>(selected.size()); }
  bool selects(Index eq, Index var) const;
  /// Dense VAR(max_order) with zeros at unselected terms.
  VarModel as_var_model() const;
};

/// Progressive-in-time forward selection minimizing BIC per equation.
RestrictedVarModel fit_restricted_var(const TimeSeriesSet& ts, int p_max);
/// Same, for a subset of equations only (others left empty).
RestrictedVarModel fit_restricted_var(const TimeSeriesSet& ts, int p_max, const std::vector<Index>& equations);

/// Forward selection for one equation on a precomputed design.
LagSet select_restricted_terms(const LaggedGram& gram, Index eq);

struct SpectralModel {
  Vector freqs;                     // cycles per sample, in (0, 0.5]
  std::vector<ComplexMatrix> abar;  // I - sum_k A_k e^{-i 2 pi f k}
  std::vector<ComplexMatrix> h;     // abar^{-1}
  std::vector<ComplexMatrix> s;     // h sigma h^*
  Matrix sigma;
  bool stable = true;

  Index size() const noexcept { return freqs.size(); }
};

inline constexpr int kDefaultFrequencyPoints = 128;

/// Uniform grid f_m = m * 0.5 / F, m = 1..F.
Vector frequency_grid(int points);

SpectralModel spectral_transforms(const VarModel& model, int points = kDefaultFrequencyPoints);
SpectralModel spectral_transforms(const RestrictedVarModel& model, int points = kDefaultFrequencyPoints);

Matrix companion_matrix(const std::vector<Matrix>& coefficients);
double spectral_radius(const std::vector<Matrix>& coefficients);
bool is_stable(const VarModel& model);

}  // namespace causnet
