#include "grover_ising/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

namespace grover_ising {

namespace {

constexpr std::size_t kSumBlock = 256;

Amplitude block_sum(const Amplitude* values, std::size_t count) {
  if (count <= kSumBlock) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      re += values[i].real();
      im += values[i].imag();
    }
    return {re, im};
  }
  // Split on a block boundary so the tree depends only on `count`.
  const std::size_t blocks = (count + kSumBlock - 1) / kSumBlock;
  const std::size_t left = (blocks / 2) * kSumBlock;
  return block_sum(values, left) + block_sum(values + left, count - left);
}

Amplitude oracle_phase(double energy, double t) {
  const double angle = energy * t;
  return {std::cos(angle), -std::sin(angle)};
}

void multiply_phases(std::span<Amplitude> amplitudes, std::span<const Amplitude> phases) {
  auto* a = reinterpret_cast<double*>(amplitudes.data());
  const auto* p = reinterpret_cast<const double*>(phases.data());
  const std::size_t n = amplitudes.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = a[2 * j];
    const double ai = a[2 * j + 1];
    const double pr = p[2 * j];
    const double pi = p[2 * j + 1];
    a[2 * j] = ar * pr - ai * pi;
    a[2 * j + 1] = ar * pi + ai * pr;
  }
}

void reflect_about_mean(std::span<Amplitude> amplitudes) {
  const Amplitude mean = pairwise_sum(amplitudes) / static_cast<double>(amplitudes.size());
  const double twice_re = 2.0 * mean.real();
  const double twice_im = 2.0 * mean.imag();
  auto* a = reinterpret_cast<double*>(amplitudes.data());
  const std::size_t n = amplitudes.size();
  for (std::size_t j = 0; j < n; ++j) {
    a[2 * j] = twice_re - a[2 * j];
    a[2 * j + 1] = twice_im - a[2 * j + 1];
  }
}

double target_probability(std::span<const Amplitude> amplitudes,
                          std::span<const std::size_t> targets) {
  double p = 0.0;
  for (std::size_t idx : targets) p += std::norm(amplitudes[idx]);
  return p;
}

std::vector<std::size_t> extreme_targets(std::span<const double> energies) {
  // First occurrence of each extreme, matching Spectrum::argmin/argmax.
  const auto imin = static_cast<std::size_t>(
      std::min_element(energies.begin(), energies.end()) - energies.begin());
  const auto imax = static_cast<std::size_t>(
      std::max_element(energies.begin(), energies.end()) - energies.begin());
  if (imin == imax) return {imin};
  return {imin, imax};
}

void check_targets(std::span<const std::size_t> targets, std::size_t size) {
  for (std::size_t idx : targets) {
    if (idx >= size) throw std::out_of_range("target index outside the level list");
  }
}

}  // namespace

Amplitude pairwise_sum(std::span<const Amplitude> values) {
  return block_sum(values.data(), values.size());
}

AmplitudeState::AmplitudeState(std::vector<Amplitude> amplitudes, std::vector<double> energies)
    : amplitudes_(std::move(amplitudes)), energies_(std::move(energies)) {
  if (amplitudes_.size() != energies_.size()) {
    throw std::invalid_argument("AmplitudeState: amplitude and energy lengths differ");
  }
  if (amplitudes_.size() < 2) throw std::invalid_argument("AmplitudeState: need at least 2 levels");
}

double AmplitudeState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

void AmplitudeState::oracle_in_place(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("apply_oracle: t must be > 0");
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
    const Amplitude phase = oracle_phase(energies_[j], t);
    multiply_phases(std::span(&amplitudes_[j], 1), std::span(&phase, 1));
  }
}

void AmplitudeState::diffusion_in_place() { reflect_about_mean(amplitudes_); }

AmplitudeState uniform_state(std::vector<double> energies) {
  const std::size_t size = energies.size();
  if (size < 2) throw std::invalid_argument("uniform_state: need at least 2 levels");
  const double amp = 1.0 / std::sqrt(static_cast<double>(size));
  return AmplitudeState(std::vector<Amplitude>(size, Amplitude{amp, 0.0}), std::move(energies));
}

AmplitudeState apply_oracle(AmplitudeState state, double t) {
  state.oracle_in_place(t);
  return state;
}

AmplitudeState apply_diffusion(AmplitudeState state) {
  state.diffusion_in_place();
  return state;
}

std::vector<double> probabilities(const AmplitudeState& state) {
  std::vector<double> p(state.size());
  const auto amps = state.amplitudes();
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(amps[j]);
  return p;
}

RunResult run(std::vector<double> energies, const GroverSchedule& schedule, TraceMode trace_mode,
              std::span<const std::size_t> targets) {
  const std::size_t size = energies.size();
  if (size < 2) throw std::invalid_argument("run: need at least 2 levels");
  std::vector<std::size_t> chosen =
      targets.empty() ? extreme_targets(energies)
                      : std::vector<std::size_t>(targets.begin(), targets.end());
  check_targets(chosen, size);
  const auto extremes = extreme_targets(energies);
  const std::size_t imin = extremes.front();
  const std::size_t imax = extremes.back();

  std::vector<Amplitude> phases(size);
  for (std::size_t j = 0; j < size; ++j) {
    phases[j] = oracle_phase(energies[j], schedule.evolution_time);
  }

  AmplitudeState state = uniform_state(std::move(energies));
  std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());

  IterationTrace trace{trace_mode, {}};
  auto record = [&](int step) {
    if (trace_mode == TraceMode::none) return;
    TraceRow row;
    row.step = step;
    row.p_success = target_probability(amps, chosen);
    if (trace_mode != TraceMode::success) {
      row.p_min_state = std::norm(amps[imin]);
      row.p_max_state = std::norm(amps[imax]);
    }
    if (trace_mode == TraceMode::full) {
      row.p_levels.resize(size);
      for (std::size_t j = 0; j < size; ++j) row.p_levels[j] = std::norm(amps[j]);
    }
    trace.rows.push_back(std::move(row));
  };

  record(0);
  for (int step = 1; step <= schedule.iterations; ++step) {
    multiply_phases(amps, phases);
    reflect_about_mean(amps);
    record(step);
  }
  std::vector<double> levels(state.energies().begin(), state.energies().end());
  return {AmplitudeState(std::move(amps), std::move(levels)), std::move(trace)};
}

std::vector<double> success_curve(std::span<const double> energies, double t, int n_max,
                                  std::span<const std::size_t> targets) {
  const std::size_t size = energies.size();
  if (size < 2) throw std::invalid_argument("success_curve: need at least 2 levels");
  if (!(t > 0.0)) throw std::invalid_argument("success_curve: t must be > 0");
  if (n_max < 0) throw std::invalid_argument("success_curve: n_max must be >= 0");
  check_targets(targets, size);
  std::vector<Amplitude> phases(size);
  for (std::size_t j = 0; j < size; ++j) phases[j] = oracle_phase(energies[j], t);
  std::vector<Amplitude> amps(size, Amplitude{1.0 / std::sqrt(static_cast<double>(size)), 0.0});
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n_max) + 1);
  curve.push_back(target_probability(amps, targets));
  for (int step = 1; step <= n_max; ++step) {
    multiply_phases(amps, phases);
    reflect_about_mean(amps);
    curve.push_back(target_probability(amps, targets));
  }
  return curve;
}

std::vector<double> xi_transform(std::span<const double> energies) {
  if (energies.empty()) throw std::invalid_argument("xi_transform: empty spectrum");
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double e_min = *lo;
  const double e_max = *hi;
  if (!(e_max > e_min)) throw std::invalid_argument("xi_transform: flat spectrum");
  std::vector<double> xi(energies.size());
  const double width = e_max - e_min;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    xi[j] = std::clamp((energies[j] - e_min) / width, 0.0, 1.0);
  }
  return xi;
}

std::vector<double> xi_transform(const Spectrum& spectrum) {
  return xi_transform(spectrum.energies());
}

std::map<std::size_t, std::size_t> measure(const AmplitudeState& state, std::size_t n_shots,
                                           std::uint64_t seed) {
  std::map<std::size_t, std::size_t> histogram;
  if (n_shots == 0) return histogram;
  const auto amps = state.amplitudes();
  std::vector<double> cumulative(amps.size());
  double total = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    total += std::norm(amps[j]);
    cumulative[j] = total;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, total);
  for (std::size_t shot = 0; shot < n_shots; ++shot) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++histogram[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return histogram;
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "step,p_success";
  if (trace.mode == TraceMode::summary || trace.mode == TraceMode::full) {
    out << ",p_min_state,p_max_state";
  }
  if (trace.mode == TraceMode::full && !trace.rows.empty()) {
    for (std::size_t j = 0; j < trace.rows.front().p_levels.size(); ++j) out << ",p_" << j;
  }
  out << '\n' << std::setprecision(12);
  for (const auto& row : trace.rows) {
    out << row.step << ',' << row.p_success;
    if (trace.mode == TraceMode::summary || trace.mode == TraceMode::full) {
      out << ',' << row.p_min_state << ',' << row.p_max_state;
    }
    for (double p : row.p_levels) out << ',' << p;
    out << '\n';
  }
}

void write_snapshot_csv(const AmplitudeState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_snapshot_csv: cannot open " + path.string());
  out << "index,energy,probability\n" << std::setprecision(12);
  const auto amps = state.amplitudes();
  const auto energies = state.energies();
  for (std::size_t j = 0; j < amps.size(); ++j) {
    out << j << ',' << energies[j] << ',' << std::norm(amps[j]) << '\n';
  }
}

}  // namespace grover_ising
