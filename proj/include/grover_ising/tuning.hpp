#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grover_ising/ising.hpp"
#include "grover_ising/spectral.hpp"

namespace grover_ising {

enum class Objective {
  extreme_pair,    // P(lowest) + P(highest)
  max_abs,         // P(level with the largest |E|)
  nearest_target,  // P(level closest to e_tar)
};

struct TuneObjective {
  Objective kind = Objective::extreme_pair;
  double e_tar = 0.0;
};

/// Level indices whose total probability the objective measures.
std::vector<std::size_t> objective_targets(std::span<const double> energies,
                                           const TuneObjective& objective);

struct TuneHistoryEntry {
  int round = 0;  // grid index for grid tuning, feedback round otherwise
  double t = 0.0;
  double best_energy = 0.0;
  double probability = 0.0;
};

struct TuneReport {
  double t_star_analytic = 0.0;
  double t_opt = 0.0;
  int n_used = 0;
  double target_probability = 0.0;
  ScheduleOrigin origin = ScheduleOrigin::manual;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t most_frequent_index = 0;  // feedback tuning only
  bool converged = false;               // feedback tuning only
  std::vector<TuneHistoryEntry> history;
  std::vector<std::string> events;
};

/// [t* - 1/(2 sigma), t* + 1/(2 sigma)], lower end clipped to stay positive.
std::pair<double, double> default_window(double t_star, double sigma);

/// Evaluates the objective after n iterations at T_i = t_a + i (t_b - t_a) / k,
/// i = 0..k-1, and keeps the best (smallest T on ties). The grid for 2k
/// contains the grid for k.
TuneReport grid_tune(std::span<const double> energies, std::pair<double, double> window,
                     int k_points, int n, const TuneObjective& objective,
                     double t_star_analytic = 0.0, int threads = 1);

struct FeedbackOptions {
  std::size_t n_shots = 1024;
  int max_rounds = 10;
  std::uint64_t seed = 0;
  /// Samples for the sigma estimate; 0 means required_samples(n_qubits).
  std::size_t sigma_samples = 0;
};

/// Measurement-feedback refinement: run at t0, measure, take the measured
/// energy E* closest to the target (largest |E| for max_abs), rerun at
/// pi/|E*|, and repeat until E* repeats or max_rounds is reached.
TuneReport feedback_tune(std::span<const double> energies, double t0, int n,
                         const TuneObjective& objective, const FeedbackOptions& options);

/// Full protocol on an instance: sigma sampled classically, T*_0 = T*, n = n*.
TuneReport feedback_tune(const IsingInstance& instance, const TuneObjective& objective,
                         const FeedbackOptions& options);

/// Objective probability after each n = 0..n_max at fixed t.
std::vector<double> scan_iterations(std::span<const double> energies, double t, int n_max,
                                    const TuneObjective& objective);

struct HarmonicLine {
  int order = 1;  // 2l + 1
  double energy = 0.0;
  std::size_t nearest_index = 0;
  double probability = 0.0;
};

struct TargetModeOptions {
  bool tune = true;
  int k_points = 20;
  /// Half-width of the reported band around e_tar, in units of sigma.
  double band_halfwidth_sigma = 0.25;
  int threads = 1;
};

struct TargetModeReport {
  TuneReport tune;
  double e_tar = 0.0;
  std::size_t target_index = 0;
  double band_probability = 0.0;
  std::vector<HarmonicLine> harmonics;
  std::vector<double> final_probabilities;
  bool distinguishable = true;  // |e_tar| >= sigma
};

/// Runs at T = pi/|e_tar| (optionally grid-tuned around it) and reports the
/// amplified band and the odd harmonics e_tar (2l + 1) inside the spectrum.
TargetModeReport target_energy_mode(std::span<const double> energies, double e_tar, int n,
                                    double sigma, const TargetModeOptions& options = {});

/// Key-value text: one `key = value` per line, history as `history.N = ...`.
void write_tune_report(const TuneReport& report, const std::filesystem::path& path);

/// CSV `round,T,best_energy,probability`.
void write_tune_history_csv(const TuneReport& report, const std::filesystem::path& path);

}  // namespace grover_ising
