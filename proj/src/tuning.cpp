#include "grover_ising/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "grover_ising/engine.hpp"
#include "grover_ising/parallel.hpp"
#include "grover_ising/seeding.hpp"

namespace grover_ising {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t index_of_max_abs(std::span<const double> energies) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < energies.size(); ++j) {
    if (std::abs(energies[j]) > std::abs(energies[best])) best = j;
  }
  return best;
}

std::size_t index_nearest(std::span<const double> energies, double e_tar) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < energies.size(); ++j) {
    if (std::abs(energies[j] - e_tar) < std::abs(energies[best] - e_tar)) best = j;
  }
  return best;
}

struct Evaluation {
  double objective = 0.0;
  double best_energy = 0.0;
};

Evaluation evaluate(std::span<const double> energies, double t, int n,
                    std::span<const std::size_t> targets) {
  const auto result = run(std::vector<double>(energies.begin(), energies.end()),
                          GroverSchedule(t, n), TraceMode::none, targets);
  const auto amps = result.final_state.amplitudes();
  Evaluation eval;
  double best_p = -1.0;
  for (std::size_t idx : targets) {
    const double p = std::norm(amps[idx]);
    eval.objective += p;
    if (p > best_p) {
      best_p = p;
      eval.best_energy = energies[idx];
    }
  }
  return eval;
}

// Ordering of measured energies by closeness to the objective target.
bool closer(double a, double b, const TuneObjective& objective) {
  if (objective.kind == Objective::nearest_target) {
    return std::abs(a - objective.e_tar) < std::abs(b - objective.e_tar);
  }
  return std::abs(a) > std::abs(b);
}

}  // namespace

std::vector<std::size_t> objective_targets(std::span<const double> energies,
                                           const TuneObjective& objective) {
  if (energies.empty()) throw std::invalid_argument("objective_targets: empty spectrum");
  switch (objective.kind) {
    case Objective::extreme_pair: {
      const auto imin = static_cast<std::size_t>(
          std::min_element(energies.begin(), energies.end()) - energies.begin());
      const auto imax = static_cast<std::size_t>(
          std::max_element(energies.begin(), energies.end()) - energies.begin());
      if (imin == imax) return {imin};
      return {imin, imax};
    }
    case Objective::max_abs: return {index_of_max_abs(energies)};
    case Objective::nearest_target: return {index_nearest(energies, objective.e_tar)};
  }
  throw std::invalid_argument("objective_targets: unknown objective");
}

std::pair<double, double> default_window(double t_star, double sigma) {
  if (!(t_star > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("default_window: t_star and sigma must be positive");
  }
  const double half = 0.5 / sigma;
  return {std::max(t_star - half, 1e-3 * t_star), t_star + half};
}

TuneReport grid_tune(std::span<const double> energies, std::pair<double, double> window,
                     int k_points, int n, const TuneObjective& objective,
                     double t_star_analytic, int threads) {
  const auto [t_a, t_b] = window;
  if (!(t_a > 0.0) || !(t_b > t_a)) throw std::invalid_argument("grid_tune: empty window");
  if (k_points < 2) throw std::invalid_argument("grid_tune: need at least 2 grid points");
  if (n < 1) throw std::invalid_argument("grid_tune: n must be >= 1");
  const auto targets = objective_targets(energies, objective);

  const auto k = static_cast<std::size_t>(k_points);
  std::vector<Evaluation> evals(k);
  std::vector<double> times(k);
  for (std::size_t i = 0; i < k; ++i) {
    times[i] = t_a + static_cast<double>(i) * (t_b - t_a) / static_cast<double>(k);
  }
  parallel_for(k, threads, [&](std::size_t i) { evals[i] = evaluate(energies, times[i], n, targets); });

  TuneReport report;
  report.t_star_analytic = t_star_analytic;
  report.n_used = n;
  report.origin = ScheduleOrigin::grid_tuned;
  report.window_lo = t_a;
  report.window_hi = t_b;
  std::size_t best = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (evals[i].objective > evals[best].objective) best = i;
    report.history.push_back(
        {static_cast<int>(i), times[i], evals[i].best_energy, evals[i].objective});
  }
  report.t_opt = times[best];
  report.target_probability = evals[best].objective;
  return report;
}

TuneReport feedback_tune(std::span<const double> energies, double t0, int n,
                         const TuneObjective& objective, const FeedbackOptions& options) {
  if (options.n_shots < 1) throw std::invalid_argument("feedback_tune: n_shots must be >= 1");
  if (options.max_rounds < 1) throw std::invalid_argument("feedback_tune: max_rounds must be >= 1");
  if (objective.kind == Objective::extreme_pair) {
    throw std::invalid_argument("feedback_tune: use max_abs or nearest_target");
  }
  TuneReport report;
  report.t_star_analytic = t0;
  report.n_used = n;
  report.origin = ScheduleOrigin::feedback_tuned;

  std::vector<double> levels(energies.begin(), energies.end());
  double t = t0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  std::map<std::size_t, std::size_t> last_histogram;
  for (int round = 0; round < options.max_rounds; ++round) {
    const auto result = run(levels, GroverSchedule(t, n));
    last_histogram = measure(result.final_state, options.n_shots,
                             derive_seed(options.seed, SeedStream::feedback, static_cast<std::uint64_t>(round)));

    std::vector<std::pair<std::size_t, std::size_t>> seen(last_histogram.begin(), last_histogram.end());
    std::stable_sort(seen.begin(), seen.end(), [&](const auto& a, const auto& b) {
      return closer(levels[a.first], levels[b.first], objective);
    });
    const auto usable = std::find_if(seen.begin(), seen.end(),
                                     [&](const auto& entry) { return levels[entry.first] != 0.0; });
    if (usable == seen.end()) {
      throw std::domain_error("feedback_tune: every measured energy is zero; no phase-flip time exists");
    }
    if (usable != seen.begin()) {
      report.events.push_back("round " + std::to_string(round) +
                              ": closest measured energy is 0, using the next closest");
    }
    const double best = levels[usable->first];
    report.history.push_back({round, t, best,
                              static_cast<double>(usable->second) / static_cast<double>(options.n_shots)});
    report.t_opt = t;
    if (best == previous) {
      report.converged = true;
      break;
    }
    previous = best;
    if (round + 1 < options.max_rounds) t = kPi / std::abs(best);
  }
  if (!report.converged) report.events.push_back("stopped after max_rounds without convergence");

  std::size_t mode = 0;
  std::size_t mode_count = 0;
  for (const auto& [idx, count] : last_histogram) {
    if (count > mode_count) {
      mode = idx;
      mode_count = count;
    }
  }
  report.most_frequent_index = mode;
  const auto targets = objective_targets(levels, objective);
  report.target_probability = evaluate(levels, report.t_opt, n, targets).objective;
  return report;
}

TuneReport feedback_tune(const IsingInstance& instance, const TuneObjective& objective,
                         const FeedbackOptions& options) {
  const Spectrum spectrum = enumerate_spectrum(instance);
  const int n_qubits = instance.n_qubits();
  const std::size_t samples =
      options.sigma_samples ? options.sigma_samples : required_samples(n_qubits);
  const auto sigma = estimate_sigma(instance, samples, options.seed);
  const SpectralModel model(sigma.sigma_hat, n_qubits);
  const double t0 = objective.kind == Objective::nearest_target
                        ? kPi / std::abs(objective.e_tar)
                        : optimal_time(model);
  const int n = optimal_iterations(model.n_states(), false);
  auto report = feedback_tune(spectrum.energies(), t0, n, objective, options);
  report.t_star_analytic = t0;
  return report;
}

std::vector<double> scan_iterations(std::span<const double> energies, double t, int n_max,
                                    const TuneObjective& objective) {
  const auto targets = objective_targets(energies, objective);
  return success_curve(energies, t, n_max, targets);
}

TargetModeReport target_energy_mode(std::span<const double> energies, double e_tar, int n,
                                    double sigma, const TargetModeOptions& options) {
  if (e_tar == 0.0 || !std::isfinite(e_tar)) {
    throw std::invalid_argument("target_energy_mode: e_tar must be finite and nonzero");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("target_energy_mode: sigma must be positive");
  TargetModeReport out;
  out.e_tar = e_tar;
  out.distinguishable = std::abs(e_tar) >= sigma;
  const TuneObjective objective{Objective::nearest_target, e_tar};
  const double t0 = kPi / std::abs(e_tar);

  if (options.tune) {
    out.tune = grid_tune(energies, default_window(t0, sigma), options.k_points, n, objective, t0,
                         options.threads);
  } else {
    out.tune.t_star_analytic = t0;
    out.tune.t_opt = t0;
    out.tune.n_used = n;
    out.tune.origin = ScheduleOrigin::analytic;
  }
  if (!out.distinguishable) {
    out.tune.events.push_back("|e_tar| < sigma: amplified peaks around e_tar may overlap");
  }

  const auto result = run(std::vector<double>(energies.begin(), energies.end()),
                          GroverSchedule(out.tune.t_opt, n));
  out.final_probabilities = probabilities(result.final_state);
  out.target_index = index_nearest(energies, e_tar);
  out.tune.target_probability = out.final_probabilities[out.target_index];

  const double half = options.band_halfwidth_sigma * sigma;
  for (std::size_t j = 0; j < energies.size(); ++j) {
    if (std::abs(energies[j] - e_tar) <= half) out.band_probability += out.final_probabilities[j];
  }
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  for (int order : {-3, -1, 1, 3}) {
    const double e = e_tar * order;
    if (e < *lo - half || e > *hi + half) continue;
    const std::size_t idx = index_nearest(energies, e);
    out.harmonics.push_back({order, e, idx, out.final_probabilities[idx]});
  }
  return out;
}

void write_tune_report(const TuneReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_tune_report: cannot open " + path.string());
  out << std::setprecision(17);
  out << "origin = " << to_string(report.origin) << '\n'
      << "t_star_analytic = " << report.t_star_analytic << '\n'
      << "t_opt = " << report.t_opt << '\n'
      << "n_used = " << report.n_used << '\n'
      << "target_probability = " << report.target_probability << '\n'
      << "window_lo = " << report.window_lo << '\n'
      << "window_hi = " << report.window_hi << '\n'
      << "converged = " << (report.converged ? "true" : "false") << '\n'
      << "most_frequent_index = " << report.most_frequent_index << '\n';
  for (std::size_t i = 0; i < report.history.size(); ++i) {
    const auto& h = report.history[i];
    out << "history." << i << " = " << h.round << ' ' << h.t << ' ' << h.best_energy << ' '
        << h.probability << '\n';
  }
  for (std::size_t i = 0; i < report.events.size(); ++i) {
    out << "event." << i << " = " << report.events[i] << '\n';
  }
}

void write_tune_history_csv(const TuneReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_tune_history_csv: cannot open " + path.string());
  out << "round,T,best_energy,probability\n" << std::setprecision(12);
  for (const auto& h : report.history) {
    out << h.round << ',' << h.t << ',' << h.best_energy << ',' << h.probability << '\n';
  }
}

}  // namespace grover_ising
