#include "grover_ising/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "grover_ising/seeding.hpp"

namespace grover_ising {

namespace {

constexpr double kPi = std::numbers::pi;

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace

SpectralModel::SpectralModel(double sigma_, int n_qubits_) : sigma(sigma_), n_qubits(n_qubits_) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("SpectralModel: sigma must be positive and finite");
  }
  if (n_qubits < 1 || n_qubits > 63) {
    throw std::invalid_argument("SpectralModel: n_qubits must be in [1, 63]");
  }
}

SpectralModel SpectralModel::from_spectrum(const Spectrum& spectrum) {
  return SpectralModel(spectrum.stddev(), spectrum.n_qubits());
}

double SpectralModel::n_states() const { return std::ldexp(1.0, n_qubits); }

std::string_view to_string(ScheduleOrigin origin) {
  switch (origin) {
    case ScheduleOrigin::analytic: return "analytic";
    case ScheduleOrigin::grid_tuned: return "grid-tuned";
    case ScheduleOrigin::feedback_tuned: return "feedback-tuned";
    case ScheduleOrigin::manual: return "manual";
  }
  return "unknown";
}

GroverSchedule::GroverSchedule(double t, int n, ScheduleOrigin o)
    : evolution_time(t), iterations(n), origin(o) {
  if (!(evolution_time > 0.0) || !std::isfinite(evolution_time)) {
    throw std::invalid_argument("GroverSchedule: evolution time must be positive");
  }
  if (iterations < 1) throw std::invalid_argument("GroverSchedule: iterations must be >= 1");
}

SigmaEstimate estimate_sigma(const IsingInstance& instance, std::size_t m_samples,
                             std::uint64_t seed) {
  if (m_samples < 2) throw std::invalid_argument("estimate_sigma: need at least 2 samples");
  const int n = instance.n_qubits();
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < m_samples; ++i) {
    const std::uint64_t bits = splitmix64(derive_seed(seed, SeedStream::sigma_sampling, i)) & mask;
    const double e = energy(instance, SpinConfiguration{bits});
    const double delta = e - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (e - mean);
  }
  const double dof = static_cast<double>(m_samples - 1);
  const double sigma_hat = std::sqrt(m2 / dof);
  return {sigma_hat, sigma_hat / std::sqrt(2.0 * dof)};
}

double extreme_quantile(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 63) {
    throw std::invalid_argument("extreme_quantile: n_qubits must be in [1, 63]");
  }
  const double target = std::ldexp(1.0, -n_qubits);
  if (upper_tail(0.0) <= target) return 0.0;
  double lo = 0.0;
  double hi = 10.0;
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (upper_tail(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double extreme_quantile(const SpectralModel& model) { return extreme_quantile(model.n_qubits); }

double optimal_time(const SpectralModel& model) {
  const double e = extreme_quantile(model);
  if (e == 0.0) {
    throw std::domain_error("optimal_time: extreme quantile is zero for a single qubit");
  }
  return kPi / (model.sigma * e);
}

double asymptotic_time(const SpectralModel& model) {
  const double n = model.n_qubits;
  const double ln2 = std::numbers::ln2;
  return (1.0 / model.sigma) * (kPi / std::sqrt(2.0 * ln2)) * (1.0 / std::sqrt(n)) *
         (1.0 + std::log(n) / (4.0 * ln2 * n));
}

int optimal_iterations(double n_states, bool degenerate_pair) {
  if (!(n_states >= 2.0)) throw std::invalid_argument("optimal_iterations: need N_s >= 2");
  const double effective = degenerate_pair ? n_states / 2.0 : n_states;
  const double n = std::round(kPi / 4.0 * std::sqrt(effective));
  return n < 1.0 ? 1 : static_cast<int>(n);
}

GroverSchedule analytic_schedule(const SpectralModel& model, bool degenerate_pair) {
  return GroverSchedule(optimal_time(model), optimal_iterations(model.n_states(), degenerate_pair),
                        ScheduleOrigin::analytic);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0, 1)");
  // Acklam's rational approximation, then Halley refinement against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int iter = 0; iter < 2; ++iter) {
    const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
    const double u = (cdf - p) * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double normal_quantile_tail_asymptotic(double n_states) {
  if (!(n_states > 2.0)) throw std::domain_error("normal_quantile_tail_asymptotic: need N_s > 2");
  const double ln_n = std::log(n_states);
  return -std::sqrt(2.0 * std::log(n_states / std::sqrt(4.0 * kPi * ln_n)));
}

double gap_estimate(const SpectralModel& model) {
  return model.sigma / std::sqrt(2.0 * std::log(model.n_states()));
}

double quantile_gap(const SpectralModel& model) {
  const double n = model.n_states();
  if (n < 4.0) throw std::domain_error("quantile_gap: need N_s >= 4");
  return model.sigma * (normal_quantile(2.0 / n) - normal_quantile(1.0 / n));
}

double critical_gap(const GroverSchedule& schedule) {
  return 2.0 * kPi / (schedule.evolution_time * schedule.iterations);
}

std::size_t required_samples(int n_qubits, double safety) {
  if (n_qubits < 1) throw std::invalid_argument("required_samples: n_qubits must be >= 1");
  if (!(safety > 0.0)) throw std::invalid_argument("required_samples: safety must be positive");
  const double nq = n_qubits;
  const double m = std::ceil(safety * nq * nq - 1e-9);
  return m < 2.0 ? std::size_t{2} : static_cast<std::size_t>(m);
}

double iteration_shift(double t_exact, double t_estimated, int iterations) {
  const GroverSchedule exact(t_exact, iterations);
  return std::abs(t_estimated - t_exact) / (t_exact * t_exact * critical_gap(exact));
}

}  // namespace grover_ising
