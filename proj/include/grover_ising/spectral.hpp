#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "grover_ising/ising.hpp"

namespace grover_ising {

/// Gaussian description of a 2^n-level spectrum with deviation `sigma`.
struct SpectralModel {
  double sigma = 1.0;
  int n_qubits = 1;

  SpectralModel(double sigma, int n_qubits);
  static SpectralModel from_spectrum(const Spectrum& spectrum);

  double n_states() const;
};

enum class ScheduleOrigin { analytic, grid_tuned, feedback_tuned, manual };

std::string_view to_string(ScheduleOrigin origin);

/// Evolution time T of the Ising oracle and number n of Grover iterations.
struct GroverSchedule {
  double evolution_time = 1.0;
  int iterations = 1;
  ScheduleOrigin origin = ScheduleOrigin::manual;

  GroverSchedule(double evolution_time, int iterations,
                 ScheduleOrigin origin = ScheduleOrigin::manual);
};

struct SigmaEstimate {
  double sigma_hat = 0.0;
  double std_error = 0.0;
};

/// Sample standard deviation of the energies of `m_samples` uniformly drawn
/// bitstrings. Sample i is a pure function of (seed, i).
SigmaEstimate estimate_sigma(const IsingInstance& instance, std::size_t m_samples,
                             std::uint64_t seed);

/// |e*_min| solving erfc(x / sqrt 2) / 2 = 2^-n_qubits.
double extreme_quantile(int n_qubits);
double extreme_quantile(const SpectralModel& model);

/// T* = pi / (sigma |e*_min|), the phase-flip time of the expected extremes.
double optimal_time(const SpectralModel& model);

/// Large-n expansion of optimal_time.
double asymptotic_time(const SpectralModel& model);

/// round(pi/4 sqrt(N_s)), or round(pi/4 sqrt(N_s/2)) when the two extreme
/// states are both phase-flipped. Never below 1.
int optimal_iterations(double n_states, bool degenerate_pair);

GroverSchedule analytic_schedule(const SpectralModel& model, bool degenerate_pair);

/// Standard normal quantile Phi^-1(p), p in (0, 1).
double normal_quantile(double p);

/// Leading asymptotic form of Phi^-1(1/N_s): -sqrt(2 ln(N_s / sqrt(4 pi ln N_s))).
double normal_quantile_tail_asymptotic(double n_states);

/// sigma / sqrt(2 ln N_s).
double gap_estimate(const SpectralModel& model);

/// sigma [Phi^-1(2/N_s) - Phi^-1(1/N_s)].
double quantile_gap(const SpectralModel& model);

/// Delta* = 2 pi / (T n): gap below which a nearby level is not resolved
/// within n iterations.
double critical_gap(const GroverSchedule& schedule);

inline constexpr double kDefaultSampleSafety = 100.0;

/// ceil(safety * n_qubits^2).
std::size_t required_samples(int n_qubits, double safety = kDefaultSampleSafety);

/// Iteration-count shift dT / (T^2 Delta*) caused by using `t_estimated`
/// instead of `t_exact` with `iterations` Grover steps.
double iteration_shift(double t_exact, double t_estimated, int iterations);

}  // namespace grover_ising
