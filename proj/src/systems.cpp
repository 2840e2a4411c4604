#include "causnet/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace causnet {
namespace {

void require_chain_size(int k) {
  if (k < 3) throw Error(ErrorCode::KTooSmall, "chain coupling needs K >= 3");
}

bool all_channels_vary(const Matrix& x) {
  for (Index j = 0; j < x.cols(); ++j) {
    if (x.col(j).maxCoeff() - x.col(j).minCoeff() <= 0.0) return false;
  }
  return true;
}

}  // namespace

CouplingGraph chain_coupling(int k) {
  require_chain_size(k);
  IntMatrix a = IntMatrix::Zero(k, k);
  for (int i = 1; i + 1 < k; ++i) {
    a(i - 1, i) = 1;
    a(i + 1, i) = 1;
  }
  return CouplingGraph(std::move(a), "truth");
}

// --- Henon ---------------------------------------------------------------

SystemRealization gen_henon(int k, double coupling, Index n, std::uint64_t seed) {
  require_chain_size(k);
  if (!(coupling >= 0.0 && coupling <= 0.5)) throw Error(ErrorCode::InvalidArgument, "Henon coupling must lie in [0, 0.5]");
  if (n < 2) throw Error(ErrorCode::SeriesTooShort, "n must be >= 2");

  const Index total = n + kHenonTransient;
  for (int attempt = 0; attempt <= kHenonMaxRetries; ++attempt) {
    Rng rng(derive_seed(seed, {0x48454e4fULL, static_cast<std::uint64_t>(attempt)}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector prev2(k), prev(k), next(k);
    for (int i = 0; i < k; ++i) prev2(i) = unit(rng);
    for (int i = 0; i < k; ++i) prev(i) = unit(rng);

    Matrix out(n, k);
    bool diverged = false;
    for (Index t = 0; t < total && !diverged; ++t) {
      for (int i = 0; i < k; ++i) {
        double drive = prev(i);
        if (i > 0 && i + 1 < k) drive = 0.5 * coupling * (prev(i - 1) + prev(i + 1)) + (1.0 - coupling) * prev(i);
        next(i) = 1.4 - drive * drive + 0.3 * prev2(i);
        if (!(std::abs(next(i)) <= kHenonDivergence)) diverged = true;
      }
      prev2 = prev;
      prev = next;
      if (t >= kHenonTransient) out.row(t - kHenonTransient) = next.transpose();
    }
    if (!diverged && all_channels_vary(out)) return {TimeSeriesSet(std::move(out)), chain_coupling(k)};
  }
  throw Error(ErrorCode::PersistentDivergence, "Henon iteration diverged on every reseeding attempt");
}

// --- Mackey-Glass --------------------------------------------------------

Matrix simulate_mackey_glass(const Matrix& coupling, const MackeyGlassOptions& opt, Index n, std::uint64_t seed) {
  const Index k = coupling.rows();
  if (k < 1 || coupling.cols() != k) throw Error(ErrorCode::DimensionMismatch, "coupling matrix must be square and non-empty");
  if ((coupling.array() < 0.0).any()) throw Error(ErrorCode::InvalidArgument, "coupling weights must be non-negative");
  if (!(opt.delay > 0.0 && opt.step > 0.0 && opt.sample_interval > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "delay, step and sample interval must be positive");
  }
  if (n < 2) throw Error(ErrorCode::SeriesTooShort, "n must be >= 2");

  const double h = opt.step;
  const auto delay_steps = static_cast<Index>(std::llround(opt.delay / h));
  const auto sample_steps = std::max<Index>(1, static_cast<Index>(std::llround(opt.sample_interval / h)));
  const auto transient_steps = static_cast<Index>(std::ceil(opt.transient_delays * opt.delay / h));
  if (delay_steps < 1) throw Error(ErrorCode::InvalidArgument, "delay must be at least one integration step");

  // Ring buffer of the last delay_steps + 1 grid states; slot (s mod size) holds step s.
  const Index size = delay_steps + 1;
  Matrix hist(size, k);
  Rng rng(derive_seed(seed, {0x4d47ULL}));
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (Index s = 0; s < size; ++s) {
    for (Index j = 0; j < k; ++j) hist(s, j) = 0.5 + jitter(rng);
  }
  // The constant history stands for steps -delay_steps .. 0.
  auto slot = [size](Index s) { return ((s % size) + size) % size; };

  Vector x = hist.row(slot(0)).transpose();
  Vector lag0(k), lag_half(k), lag1(k), f(k), k1(k), k2(k), k3(k), k4(k), tmp(k);
  auto nonlinear = [](double v) {
    const double v2 = v * v, v4 = v2 * v2, v8 = v4 * v4;
    return v / (1.0 + v8 * v2);
  };
  auto rhs = [&](const Vector& state, const Vector& delayed, Vector& out) {
    for (Index j = 0; j < k; ++j) f(j) = nonlinear(delayed(j));
    out.noalias() = coupling.transpose() * f;
    out -= 0.1 * state;
  };

  const Index total = transient_steps + (n - 1) * sample_steps + 1;
  Matrix out(n, k);
  Index written = 0;
  for (Index step = 0; step < total; ++step) {
    // Delayed values at t - D, t + h/2 - D and t + h - D (linear interpolation at the midpoint).
    lag0 = hist.row(slot(step - delay_steps)).transpose();
    lag1 = hist.row(slot(step - delay_steps + 1)).transpose();
    lag_half = 0.5 * (lag0 + lag1);

    if (step >= transient_steps && (step - transient_steps) % sample_steps == 0 && written < n) {
      out.row(written++) = x.transpose();
    }

    rhs(x, lag0, k1);
    tmp = x + 0.5 * h * k1;
    rhs(tmp, lag_half, k2);
    tmp = x + 0.5 * h * k2;
    rhs(tmp, lag_half, k3);
    tmp = x + h * k3;
    rhs(tmp, lag1, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw Error(ErrorCode::NumericBlowup, "Mackey-Glass integration produced a non-finite state");
    hist.row(slot(step + 1)) = x.transpose();
  }
  return out;
}

SystemRealization gen_mackey_glass(int k, double coupling, double delay, Index n, std::uint64_t seed) {
  require_chain_size(k);
  if (!(coupling >= 0.0)) throw Error(ErrorCode::InvalidArgument, "coupling must be non-negative");
  MackeyGlassOptions opt;
  opt.delay = delay;
  CouplingGraph graph = chain_coupling(k);
  Matrix c = graph.adjacency().cast<double>() * coupling;
  c.diagonal().setConstant(opt.self_coupling);

  for (int attempt = 0; attempt <= kHenonMaxRetries; ++attempt) {
    try {
      Matrix x = simulate_mackey_glass(c, opt, n, derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
      if (all_channels_vary(x)) return {TimeSeriesSet(std::move(x)), std::move(graph)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericBlowup) throw;
    }
  }
  throw Error(ErrorCode::NumericBlowup, "Mackey-Glass integration failed on every reseeding attempt");
}

// --- neural mass ---------------------------------------------------------

void NeuralMassParams::validate() const {
  const double pos[] = {A, B, a, b, ad, C1, C2, C3, C4, e0, v0, r, p_mean, sample_rate, transient_seconds + 1.0};
  for (double v : pos) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "neural mass parameters must be positive");
  }
  if (!(p_std >= 0.0)) throw Error(ErrorCode::InvalidArgument, "input noise std must be non-negative");
  if (steps_per_sample < 1) throw Error(ErrorCode::InvalidArgument, "steps_per_sample must be >= 1");
}

double NeuralMassParams::sigmoid(double v) const noexcept { return 2.0 * e0 / (1.0 + std::exp(r * (v0 - v))); }

namespace {

// One attempt at integrating the coupled populations; returns nullopt on blow-up.
std::optional<Matrix> integrate_neural_mass(const Matrix& coupling, const NeuralMassParams& prm, Index n, int substeps,
                                            std::uint64_t seed) {
  const Index k = coupling.rows();
  const double dt = 1.0 / (prm.sample_rate * substeps);
  const auto transient = static_cast<Index>(std::ceil(prm.transient_seconds * prm.sample_rate));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // State columns y0..y7 per population.
  Matrix y = Matrix::Zero(k, 8);
  for (Index j = 0; j < k; ++j) {
    for (int v = 0; v < 3; ++v) y(j, v) = 0.1 * unit(rng);
  }
  Matrix dy(k, 8);
  Vector noise(k), inflow(k);
  const double Aa = prm.A * prm.a, Bb = prm.B * prm.b, Aad = prm.A * prm.ad;

  Matrix out(n, k);
  const Index total = transient + n;
  for (Index sample = 0; sample < total; ++sample) {
    for (int sub = 0; sub < substeps; ++sub) {
      inflow.noalias() = coupling.transpose() * y.col(6);
      for (Index j = 0; j < k; ++j) noise(j) = gauss(rng);
      for (Index j = 0; j < k; ++j) {
        const double y0 = y(j, 0), y1 = y(j, 1), y2 = y(j, 2);
        const double s12 = prm.sigmoid(y1 - y2);
        dy(j, 0) = y(j, 3);
        dy(j, 3) = Aa * s12 - 2.0 * prm.a * y(j, 3) - prm.a * prm.a * y0;
        dy(j, 1) = y(j, 4);
        const double input = prm.p_mean + prm.p_std * noise(j);
        dy(j, 4) = Aa * (input + prm.C2 * prm.sigmoid(prm.C1 * y0) + inflow(j)) - 2.0 * prm.a * y(j, 4) -
                   prm.a * prm.a * y1;
        dy(j, 2) = y(j, 5);
        dy(j, 5) = Bb * (prm.C4 * prm.sigmoid(prm.C3 * y0)) - 2.0 * prm.b * y(j, 5) - prm.b * prm.b * y2;
        dy(j, 6) = y(j, 7);
        dy(j, 7) = Aad * s12 - 2.0 * prm.ad * y(j, 7) - prm.ad * prm.ad * y(j, 6);
      }
      y += dt * dy;
    }
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e8) return std::nullopt;
    if (sample >= transient) out.row(sample - transient) = y.col(0).transpose();
  }
  return out;
}

}  // namespace

SystemRealization gen_neural_mass(int k, double coupling, const NeuralMassParams& params, Index n, std::uint64_t seed) {
  require_chain_size(k);
  params.validate();
  if (!(coupling >= 0.0)) throw Error(ErrorCode::InvalidArgument, "coupling must be non-negative");
  if (n < 2) throw Error(ErrorCode::SeriesTooShort, "n must be >= 2");
  CouplingGraph graph = chain_coupling(k);
  const Matrix c = graph.adjacency().cast<double>() * coupling;

  // First try the nominal step, then once with the step halved.
  for (int refine = 0; refine < 2; ++refine) {
    const int substeps = params.steps_per_sample << refine;
    auto x = integrate_neural_mass(c, params, n, substeps, derive_seed(seed, {0x4e4d4dULL}));
    if (x && all_channels_vary(*x)) return {TimeSeriesSet(std::move(*x)), std::move(graph)};
  }
  throw Error(ErrorCode::NumericBlowup, "neural mass integration blew up even with a reduced step");
}

// --- sparse VAR ----------------------------------------------------------

void SparseVarSpec::validate() const {
  if (k < 2) throw Error(ErrorCode::KTooSmall, "sparse VAR needs K >= 2");
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "VAR order must be >= 1");
  if (!(active_fraction > 0.0 && active_fraction < 1.0)) throw Error(ErrorCode::InvalidArgument, "active fraction must lie in (0,1)");
  if (!(coupling_fraction > 0.0 && coupling_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "coupling fraction must lie in (0,1]");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorCode::InvalidArgument, "shrink factor must lie in (0,1)");
  if (!(initial_magnitude > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial magnitude must be positive");
  if (n < 2 || burn_in < 0) throw Error(ErrorCode::InvalidArgument, "invalid sample sizes");
}

VarModel build_sparse_var_model(const SparseVarSpec& spec) {
  spec.validate();
  const Index k = spec.k;
  const int p = spec.order;
  Rng rng(derive_seed(spec.seed, {0x56415253ULL}));

  // Ordered pairs i -> j (i != j) that carry a coupling.
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const auto n_pairs = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(spec.coupling_fraction * static_cast<double>(pairs.size()))), 1, pairs.size());
  pairs.resize(n_pairs);

  // Active off-diagonal slots: one lag per selected pair, the remainder spread
  // over the other lags of the selected pairs.
  const auto target_slots = static_cast<std::size_t>(std::llround(spec.active_fraction * static_cast<double>(k * k * p)));
  std::vector<Matrix> a(static_cast<std::size_t>(p), Matrix::Zero(k, k));
  std::uniform_int_distribution<int> pick_lag(0, p - 1);
  std::vector<std::pair<std::pair<Index, Index>, int>> spare;
  for (const auto& [i, j] : pairs) {
    const int lag = pick_lag(rng);
    a[static_cast<std::size_t>(lag)](j, i) = spec.initial_magnitude;
    for (int l = 0; l < p; ++l) {
      if (l != lag) spare.push_back({{i, j}, l});
    }
  }
  std::shuffle(spare.begin(), spare.end(), rng);
  const std::size_t extra = std::min(spare.size(), target_slots > n_pairs ? target_slots - n_pairs : 0);
  for (std::size_t s = 0; s < extra; ++s) {
    const auto& [ij, l] = spare[s];
    a[static_cast<std::size_t>(l)](ij.second, ij.first) = spec.initial_magnitude;
  }
  a[0].diagonal().setOnes();

  while (spectral_radius(a) >= 1.0) {
    for (auto& m : a) m *= spec.shrink;
  }

  VarModel model;
  model.order = p;
  model.coefficients = std::move(a);
  model.sigma = Matrix::Identity(k, k);
  return model;
}

CouplingGraph var_coupling_graph(const VarModel& model) {
  const Index k = model.k() > 0 ? model.k() : model.coefficients.front().rows();
  IntMatrix adj = IntMatrix::Zero(k, k);
  for (const auto& a : model.coefficients) {
    for (Index j = 0; j < k; ++j) {
      for (Index i = 0; i < k; ++i) {
        if (i != j && a(j, i) != 0.0) adj(i, j) = 1;
      }
    }
  }
  return CouplingGraph(std::move(adj), "truth");
}

Matrix simulate_var(const VarModel& model, Index n, Index burn_in, Rng& rng) {
  if (model.coefficients.empty()) throw Error(ErrorCode::InvalidArgument, "VAR model has no coefficients");
  const Index k = model.coefficients.front().rows();
  const auto p = static_cast<Index>(model.coefficients.size());
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Index total = n + burn_in + p;
  Matrix x = Matrix::Zero(total, k);
  Vector e(k);
  for (Index t = p; t < total; ++t) {
    for (Index j = 0; j < k; ++j) e(j) = gauss(rng);
    Vector v = e;
    for (Index lag = 1; lag <= p; ++lag) v.noalias() += model.coefficients[static_cast<std::size_t>(lag - 1)] * x.row(t - lag).transpose();
    x.row(t) = v.transpose();
  }
  if (!x.allFinite()) throw Error(ErrorCode::NumericBlowup, "VAR simulation produced non-finite values");
  return x.bottomRows(n);
}

SparseVarSystem gen_sparse_var(const SparseVarSpec& spec) {
  VarModel model = build_sparse_var_model(spec);
  Rng rng(derive_seed(spec.seed, {0x53494dULL}));
  Matrix x = simulate_var(model, spec.n, spec.burn_in, rng);
  CouplingGraph graph = var_coupling_graph(model);
  return {TimeSeriesSet(std::move(x)), std::move(graph), std::move(model)};
}

}  // namespace causnet
