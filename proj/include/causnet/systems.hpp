#pragma once

#include <cstdint>

#include "causnet/core_data.hpp"
#include "causnet/networks.hpp"
#include "causnet/random.hpp"
#include "causnet/var_engine.hpp"

namespace causnet {

struct SystemRealization {
  TimeSeriesSet data;
  CouplingGraph graph;
};

/// Chain ("ring without closure") coupling: every interior node i is driven
/// by i-1 and i+1; the two end nodes are uncoupled.
CouplingGraph chain_coupling(int k);

// --- S1: coupled Henon maps ------------------------------------------------

inline constexpr int kHenonTransient = 100;
inline constexpr double kHenonDivergence = 10.0;
inline constexpr int kHenonMaxRetries = 20;

SystemRealization gen_henon(int k, double coupling, Index n, std::uint64_t seed);

// --- S2: coupled Mackey-Glass delay equations ------------------------------

struct MackeyGlassOptions {
  double delay = 100.0;          // Delta, time units
  double step = 0.1;             // RK4 step
  double sample_interval = 4.0;  // time units between output samples
  double self_coupling = 0.2;    // C_ii
  double transient_delays = 10;  // transient length in multiples of Delta
};

/// Integrates dx_j/dt = -0.1 x_j + sum_i C(i, j) x_i(t-D) / (1 + x_i(t-D)^10).
/// `coupling(i, j)` is the weight of i in the equation of j (diagonal = C_ii).
/// Returns n x K samples; throws NumericBlowup on non-finite state.
Matrix simulate_mackey_glass(const Matrix& coupling, const MackeyGlassOptions& opt, Index n, std::uint64_t seed);

SystemRealization gen_mackey_glass(int k, double coupling, double delay, Index n, std::uint64_t seed);

// --- S3: coupled neural mass model -----------------------------------------

struct NeuralMassParams {
  double A = 3.45;  // mV, excitatory gain
  double B = 22.0;  // mV, slow inhibitory gain
  double a = 100.0;
  double b = 50.0;
  double ad = 33.0;
  double C1 = 135.0;
  double C2 = 0.8 * 135.0;
  double C3 = 0.25 * 135.0;
  double C4 = 0.25 * 135.0;
  double e0 = 2.5;
  double v0 = 6.0;
  double r = 0.56;
  // External input p(t), redrawn every integration step.
  double p_mean = 90.0;
  double p_std = 30.0;
  double sample_rate = 256.0;  // Hz
  int steps_per_sample = 4;    // integration step = 1 / (sample_rate * steps_per_sample)
  double transient_seconds = 2.0;

  void validate() const;
  double sigmoid(double v) const noexcept;
};

SystemRealization gen_neural_mass(int k, double coupling, const NeuralMassParams& params, Index n, std::uint64_t seed);

// --- S4: sparse VAR --------------------------------------------------------

struct SparseVarSpec {
  int k = 25;
  int order = 3;
  double active_fraction = 0.04;    // of all K*K*P coefficient slots
  double coupling_fraction = 0.08;  // of the K(K-1) ordered pairs
  double initial_magnitude = 0.9;
  double shrink = 0.98;
  Index n = 512;
  Index burn_in = 500;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SparseVarSystem {
  TimeSeriesSet data;
  CouplingGraph graph;
  VarModel model;
};

/// Coefficient construction only (no simulation); deterministic in spec.seed.
VarModel build_sparse_var_model(const SparseVarSpec& spec);
/// Ground truth: i -> j iff some lag of i has a nonzero coefficient in j's equation.
CouplingGraph var_coupling_graph(const VarModel& model);
/// Simulates with unit-variance independent Gaussian innovations.
Matrix simulate_var(const VarModel& model, Index n, Index burn_in, Rng& rng);

SparseVarSystem gen_sparse_var(const SparseVarSpec& spec);

}  // namespace causnet
