#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grover_ising/ising.hpp"
#include "grover_ising/spectral.hpp"
#include "grover_ising/tuning.hpp"

namespace grover_ising {

enum class SchedulePolicy { analytic, grid, feedback };

std::string_view to_string(SchedulePolicy policy);
SchedulePolicy parse_schedule_policy(std::string_view name);

struct ExperimentConfig {
  std::string kind = "custom";
  int n_qubits = 10;
  double sigma_eps = 1.0;
  double sigma_j = 1.0;
  int realizations = 100;
  SchedulePolicy policy = SchedulePolicy::analytic;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  int bins = 60;
  int threads = 1;

  /// Fixed evolution time / iteration count; unset means T* and n*.
  std::optional<double> t;
  std::optional<int> n;
  /// n* from sqrt(N_s / 2) instead of sqrt(N_s).
  bool degenerate_pair = false;
  /// Estimate sigma from sampled bitstrings instead of the exact spectrum.
  bool sample_sigma = false;

  // grid policy
  int k_points = 20;
  TuneObjective grid_objective{Objective::extreme_pair, 0.0};
  // feedback policy
  std::size_t shots = 1024;
  int max_rounds = 10;

  /// Keep every realization's full probability vector in the result.
  bool keep_probabilities = false;

  /// Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

struct RealizationRecord {
  std::size_t index = 0;
  std::uint64_t instance_seed = 0;
  double sigma = 0.0;
  double t = 0.0;
  int n = 0;
  double e_min = 0.0;
  double e_max = 0.0;
  double p_min = 0.0;  // P(E_min state), i.e. P(xi = 0)
  double p_max = 0.0;  // P(E_max state), i.e. P(xi = 1)
  std::size_t most_probable = 0;
  /// most_probable is a brute-force argmin or argmax.
  bool verified = false;
  std::vector<double> probabilities;  // only with keep_probabilities
};

/// Fixed-range histogram. Bin b covers [lo + b w, lo + (b + 1) w).
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> mass;

  Histogram() = default;
  Histogram(double lo, double hi, int bins);

  int bins() const { return static_cast<int>(mass.size()); }
  double width() const { return (hi - lo) / static_cast<double>(mass.size()); }
  double center(int b) const { return lo + (b + 0.5) * width(); }
  /// Values outside [lo, hi] are clamped into the edge bins.
  void add(double x, double weight);
  double total() const;
  /// mass / (total * width): unit area.
  std::vector<double> density() const;
  /// Merges groups of `factor` adjacent bins (factor must divide bins()).
  /// Total mass is unchanged.
  Histogram rebin(int factor) const;
};

/// Mean probability of the states falling in each bin (P_j vs E_j or xi_j
/// scatter in reduced form).
struct BinnedScatter {
  Histogram probability_sum;
  std::vector<std::size_t> counts;
  std::vector<double> max_probability;
};

struct EnsembleResult {
  ExperimentConfig config;
  std::vector<RealizationRecord> records;
  /// Probability-weighted level histograms; mass = number of realizations.
  Histogram weighted_energy;
  Histogram weighted_xi;
  /// Uniformly weighted level histograms of the initial state, same bins.
  Histogram initial_energy;
  Histogram initial_xi;
  BinnedScatter scatter_energy;
  BinnedScatter scatter_xi;

  double mean_p_min() const;
  double mean_p_max() const;
  /// Mean of P(xi = 0) + P(xi = 1).
  double mean_tail_probability() const;
  /// Fraction of realizations whose most probable state is a brute-force extreme.
  double verified_fraction() const;
};

EnsembleResult run_ensemble(const ExperimentConfig& config);

/// Schedule for one spectrum under the config's policy. `sigma` is the
/// spectral deviation used for T* and the tuning window.
GroverSchedule ensemble_schedule(const ExperimentConfig& config, std::span<const double> energies,
                                 double sigma, std::uint64_t realization_seed);

struct BruteForceExtremes {
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
  std::string argmin_bits;
  std::string argmax_bits;
  double e_min = 0.0;
  double e_max = 0.0;
};

/// Exhaustive scan over all 2^n configurations with a direct ordered-pair
/// energy sum. Ties resolve to the lexicographically smallest bitstring.
BruteForceExtremes brute_force_extremes(const IsingInstance& instance);

/// Standard deviation of the level distribution implied by the sampling
/// widths: sqrt(n sigma_eps^2 + kPairFactor^2 n(n-1)/2 sigma_J^2).
double ensemble_sigma(int n_qubits, double sigma_eps, double sigma_j);

/// Median absolute deviation about the median.
double median_absolute_deviation(std::span<const double> values);

/// Writes realizations.csv, hist_energy.csv, hist_xi.csv, scatter_energy.csv,
/// scatter_xi.csv and summary.txt into `dir`; returns the paths.
std::vector<std::filesystem::path> write_ensemble(const EnsembleResult& result,
                                                  const std::filesystem::path& dir);

}  // namespace grover_ising
