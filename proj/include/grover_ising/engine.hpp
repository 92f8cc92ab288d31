#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "grover_ising/ising.hpp"
#include "grover_ising/spectral.hpp"

namespace grover_ising {

using Amplitude = std::complex<double>;

/// Amplitudes over the eigenbasis of a diagonal Hamiltonian together with the
/// energies that drive the oracle. Works for full 2^n spectra and for
/// arbitrary synthetic level lists alike.
class AmplitudeState {
 public:
  AmplitudeState(std::vector<Amplitude> amplitudes, std::vector<double> energies);

  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<const double> energies() const { return energies_; }
  std::size_t size() const { return amplitudes_.size(); }
  double norm_squared() const;

  // In-place kernels behind the public value-returning operations.
  void oracle_in_place(double t);
  void diffusion_in_place();

 private:
  std::vector<Amplitude> amplitudes_;
  std::vector<double> energies_;
};

AmplitudeState uniform_state(std::vector<double> energies);

/// amplitude_j -> exp(-i E_j t) amplitude_j.
AmplitudeState apply_oracle(AmplitudeState state, double t);

/// amplitude_j -> 2 mean(amplitude) - amplitude_j, i.e. 2|s><s| - I.
AmplitudeState apply_diffusion(AmplitudeState state);

std::vector<double> probabilities(const AmplitudeState& state);

/// Complex sum with a fixed pairwise reduction tree; bit-reproducible.
Amplitude pairwise_sum(std::span<const Amplitude> values);

enum class TraceMode {
  none,     // no per-step rows
  success,  // p_success only
  summary,  // p_success, p_min_state, p_max_state
  full,     // summary plus every P_j
};

struct TraceRow {
  int step = 0;
  double p_success = 0.0;
  double p_min_state = 0.0;
  double p_max_state = 0.0;
  std::vector<double> p_levels;
};

struct IterationTrace {
  TraceMode mode = TraceMode::none;
  std::vector<TraceRow> rows;
};

struct RunResult {
  AmplitudeState final_state;
  IterationTrace trace;
};

/// Applies (diffusion o oracle) schedule.iterations times to the uniform state.
/// Success probability is the total probability of `targets`; when empty the
/// targets are the lowest- and highest-energy levels.
RunResult run(std::vector<double> energies, const GroverSchedule& schedule,
              TraceMode trace_mode = TraceMode::none,
              std::span<const std::size_t> targets = {});

/// Probability of `targets` after every step 0..n_max at fixed t, without
/// storing the state history.
std::vector<double> success_curve(std::span<const double> energies, double t, int n_max,
                                  std::span<const std::size_t> targets);

/// xi_j = (E_j - E_min) / (E_max - E_min).
std::vector<double> xi_transform(const Spectrum& spectrum);
std::vector<double> xi_transform(std::span<const double> energies);

/// Multinomial sample of n_shots level indices; deterministic given seed.
std::map<std::size_t, std::size_t> measure(const AmplitudeState& state, std::size_t n_shots,
                                           std::uint64_t seed);

/// CSV `step,p_success[,p_min_state,p_max_state[,p_0,...]]` per the trace mode.
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

/// CSV `index,energy,probability`.
void write_snapshot_csv(const AmplitudeState& state, const std::filesystem::path& path);

}  // namespace grover_ising
