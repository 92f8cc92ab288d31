#include "grover_ising/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "grover_ising/engine.hpp"
#include "grover_ising/parallel.hpp"
#include "grover_ising/seeding.hpp"

namespace grover_ising {

std::string_view to_string(SchedulePolicy policy) {
  switch (policy) {
    case SchedulePolicy::analytic: return "analytic";
    case SchedulePolicy::grid: return "grid";
    case SchedulePolicy::feedback: return "feedback";
  }
  return "unknown";
}

SchedulePolicy parse_schedule_policy(std::string_view name) {
  if (name == "analytic") return SchedulePolicy::analytic;
  if (name == "grid") return SchedulePolicy::grid;
  if (name == "feedback") return SchedulePolicy::feedback;
  throw std::invalid_argument("unknown schedule policy '" + std::string(name) +
                              "' (expected analytic, grid or feedback)");
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (n_qubits < 2 || n_qubits > kDefaultMaxQubits) {
    problems.push_back("n_qubits must be in [2, " + std::to_string(kDefaultMaxQubits) + "]");
  }
  if (!(sigma_eps > 0.0)) problems.push_back("sigma_eps must be positive");
  if (!(sigma_j > 0.0)) problems.push_back("sigma_j must be positive");
  if (realizations < 1) problems.push_back("realizations must be >= 1");
  if (bins < 2) problems.push_back("bins must be >= 2");
  if (threads < 1) problems.push_back("threads must be >= 1");
  if (t && !(*t > 0.0)) problems.push_back("t must be positive");
  if (n && *n < 0) problems.push_back("n must be >= 0");
  if (k_points < 2) problems.push_back("k_points must be >= 2");
  if (shots < 1) problems.push_back("shots must be >= 1");
  if (max_rounds < 1) problems.push_back("max_rounds must be >= 1");
  if (policy == SchedulePolicy::grid && grid_objective.kind == Objective::nearest_target &&
      grid_objective.e_tar == 0.0) {
    problems.push_back("nearest_target objective needs a nonzero e_tar");
  }
  if (problems.empty()) return;
  std::string message = "invalid experiment config:";
  for (const auto& p : problems) message += "\n  - " + p;
  throw std::invalid_argument(message);
}

Histogram::Histogram(double lo_, double hi_, int bins) : lo(lo_), hi(hi_) {
  if (bins < 1) throw std::invalid_argument("Histogram: need at least one bin");
  if (!(hi_ > lo_)) throw std::invalid_argument("Histogram: empty range");
  mass.assign(static_cast<std::size_t>(bins), 0.0);
}

void Histogram::add(double x, double weight) {
  const double pos = (x - lo) / width();
  const int last = bins() - 1;
  const int b = pos <= 0.0 ? 0 : std::min(static_cast<int>(pos), last);
  mass[static_cast<std::size_t>(b)] += weight;
}

double Histogram::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

std::vector<double> Histogram::density() const {
  const double norm = total() * width();
  std::vector<double> out(mass.size(), 0.0);
  if (norm > 0.0) {
    for (std::size_t b = 0; b < mass.size(); ++b) out[b] = mass[b] / norm;
  }
  return out;
}

Histogram Histogram::rebin(int factor) const {
  if (factor < 1 || bins() % factor != 0) {
    throw std::invalid_argument("Histogram::rebin: factor must divide the bin count");
  }
  Histogram out(lo, hi, bins() / factor);
  for (int b = 0; b < bins(); ++b) {
    out.mass[static_cast<std::size_t>(b / factor)] += mass[static_cast<std::size_t>(b)];
  }
  return out;
}

double EnsembleResult::mean_p_min() const {
  double sum = 0.0;
  for (const auto& r : records) sum += r.p_min;
  return records.empty() ? 0.0 : sum / static_cast<double>(records.size());
}

double EnsembleResult::mean_p_max() const {
  double sum = 0.0;
  for (const auto& r : records) sum += r.p_max;
  return records.empty() ? 0.0 : sum / static_cast<double>(records.size());
}

double EnsembleResult::mean_tail_probability() const { return mean_p_min() + mean_p_max(); }

double EnsembleResult::verified_fraction() const {
  if (records.empty()) return 0.0;
  const auto hits = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.verified; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double ensemble_sigma(int n_qubits, double sigma_eps, double sigma_j) {
  const double pairs = static_cast<double>(IsingInstance::pair_count(n_qubits));
  return std::sqrt(n_qubits * sigma_eps * sigma_eps +
                   kPairFactor * kPairFactor * pairs * sigma_j * sigma_j);
}

double median_absolute_deviation(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median_absolute_deviation: no values");
  auto median = [](std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
      m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
  };
  std::vector<double> v(values.begin(), values.end());
  const double med = median(v);
  for (auto& x : v) x = std::abs(x - med);
  return median(std::move(v));
}

BruteForceExtremes brute_force_extremes(const IsingInstance& instance) {
  const int nq = instance.n_qubits();
  if (nq > kDefaultMaxQubits) throw std::length_error("brute_force_extremes: too many qubits");
  const auto fields = instance.fields();
  std::vector<std::vector<double>> j(static_cast<std::size_t>(nq), std::vector<double>(static_cast<std::size_t>(nq), 0.0));
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq; ++b) {
      if (a != b) j[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = instance.coupling(std::min(a, b), std::max(a, b));
    }
  }
  std::vector<double> s(static_cast<std::size_t>(nq));
  BruteForceExtremes out;
  const std::uint64_t count = std::uint64_t{1} << nq;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    for (int q = 0; q < nq; ++q) s[static_cast<std::size_t>(q)] = ((bits >> q) & 1u) ? -1.0 : 1.0;
    double e = 0.0;
    for (int a = 0; a < nq; ++a) {
      e += fields[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(a)];
      // Ordered pairs count every unordered pair twice.
      for (int b = 0; b < nq; ++b) {
        if (a != b) {
          e += 0.5 * kPairFactor * j[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
               s[static_cast<std::size_t>(a)] * s[static_cast<std::size_t>(b)];
        }
      }
    }
    if (bits == 0 || e < out.e_min) {
      out.e_min = e;
      out.argmin = bits;
    }
    if (bits == 0 || e > out.e_max) {
      out.e_max = e;
      out.argmax = bits;
    }
  }
  out.argmin_bits = to_bitstring(SpinConfiguration{out.argmin}, nq);
  out.argmax_bits = to_bitstring(SpinConfiguration{out.argmax}, nq);
  return out;
}

GroverSchedule ensemble_schedule(const ExperimentConfig& config, std::span<const double> energies,
                                 double sigma, std::uint64_t realization_seed) {
  const SpectralModel model(sigma, config.n_qubits);
  const double t0 = config.t ? *config.t : optimal_time(model);
  const int n = config.n ? *config.n : optimal_iterations(model.n_states(), config.degenerate_pair);
  if (n < 1) throw std::invalid_argument("ensemble_schedule: n must be >= 1");
  switch (config.policy) {
    case SchedulePolicy::analytic:
      return GroverSchedule(t0, n, config.t ? ScheduleOrigin::manual : ScheduleOrigin::analytic);
    case SchedulePolicy::grid: {
      const auto report = grid_tune(energies, default_window(t0, sigma), config.k_points, n,
                                    config.grid_objective, t0);
      return GroverSchedule(report.t_opt, n, ScheduleOrigin::grid_tuned);
    }
    case SchedulePolicy::feedback: {
      FeedbackOptions options;
      options.n_shots = config.shots;
      options.max_rounds = config.max_rounds;
      options.seed = realization_seed;
      const auto report =
          feedback_tune(energies, t0, n, TuneObjective{Objective::max_abs, 0.0}, options);
      return GroverSchedule(report.t_opt, n, ScheduleOrigin::feedback_tuned);
    }
  }
  throw std::invalid_argument("ensemble_schedule: unknown policy");
}

namespace {

struct RealizationData {
  std::vector<double> energies;
  std::vector<double> probabilities;
};

BinnedScatter make_scatter(double lo, double hi, int bins) {
  BinnedScatter s;
  s.probability_sum = Histogram(lo, hi, bins);
  s.counts.assign(static_cast<std::size_t>(bins), 0);
  s.max_probability.assign(static_cast<std::size_t>(bins), 0.0);
  return s;
}

void add_scatter(BinnedScatter& s, double x, double p) {
  const double pos = (x - s.probability_sum.lo) / s.probability_sum.width();
  const int last = s.probability_sum.bins() - 1;
  const auto b = static_cast<std::size_t>(pos <= 0.0 ? 0 : std::min(static_cast<int>(pos), last));
  s.probability_sum.mass[b] += p;
  ++s.counts[b];
  s.max_probability[b] = std::max(s.max_probability[b], p);
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentConfig& config) {
  config.validate();
  const auto count = static_cast<std::size_t>(config.realizations);
  EnsembleResult result;
  result.config = config;
  result.records.resize(count);
  std::vector<RealizationData> data(count);

  parallel_for(count, config.threads, [&](std::size_t r) {
    auto& rec = result.records[r];
    rec.index = r;
    rec.instance_seed = derive_seed(config.seed, SeedStream::instance, r);
    const auto instance =
        sample_instance(config.n_qubits, config.sigma_eps, config.sigma_j, rec.instance_seed);
    const Spectrum spectrum = enumerate_spectrum(instance);
    rec.sigma = config.sample_sigma
                    ? estimate_sigma(instance, required_samples(config.n_qubits),
                                     derive_seed(config.seed, SeedStream::sigma_sampling, r))
                          .sigma_hat
                    : spectrum.stddev();
    rec.e_min = spectrum.e_min();
    rec.e_max = spectrum.e_max();

    std::vector<double> probs;
    if (config.n && *config.n == 0) {
      rec.t = config.t ? *config.t : optimal_time(SpectralModel(rec.sigma, config.n_qubits));
      rec.n = 0;
      probs.assign(spectrum.size(), 1.0 / static_cast<double>(spectrum.size()));
    } else {
      const auto schedule = ensemble_schedule(config, spectrum.energies(), rec.sigma,
                                              derive_seed(config.seed, SeedStream::feedback, r));
      rec.t = schedule.evolution_time;
      rec.n = schedule.iterations;
      const auto run_result =
          run(std::vector<double>(spectrum.energies().begin(), spectrum.energies().end()), schedule);
      probs = probabilities(run_result.final_state);
    }
    rec.p_min = probs[spectrum.argmin()];
    rec.p_max = probs[spectrum.argmax()];
    rec.most_probable =
        static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    const auto brute = brute_force_extremes(instance);
    rec.verified = rec.most_probable == brute.argmin || rec.most_probable == brute.argmax;

    data[r].energies.assign(spectrum.energies().begin(), spectrum.energies().end());
    data[r].probabilities = std::move(probs);
  });

  double lo = result.records.front().e_min;
  double hi = result.records.front().e_max;
  for (const auto& rec : result.records) {
    lo = std::min(lo, rec.e_min);
    hi = std::max(hi, rec.e_max);
  }
  result.weighted_energy = Histogram(lo, hi, config.bins);
  result.initial_energy = Histogram(lo, hi, config.bins);
  result.weighted_xi = Histogram(0.0, 1.0, config.bins);
  result.initial_xi = Histogram(0.0, 1.0, config.bins);
  result.scatter_energy = make_scatter(lo, hi, config.bins);
  result.scatter_xi = make_scatter(0.0, 1.0, config.bins);

  for (std::size_t r = 0; r < count; ++r) {
    const auto& d = data[r];
    const auto xi = xi_transform(d.energies);
    const double uniform = 1.0 / static_cast<double>(d.energies.size());
    for (std::size_t j = 0; j < d.energies.size(); ++j) {
      const double p = d.probabilities[j];
      result.weighted_energy.add(d.energies[j], p);
      result.weighted_xi.add(xi[j], p);
      result.initial_energy.add(d.energies[j], uniform);
      result.initial_xi.add(xi[j], uniform);
      add_scatter(result.scatter_energy, d.energies[j], p);
      add_scatter(result.scatter_xi, xi[j], p);
    }
    if (config.keep_probabilities) result.records[r].probabilities = d.probabilities;
  }
  return result;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(12);
  return out;
}

void write_histograms(const Histogram& weighted, const Histogram& initial,
                      const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "bin_lo,bin_hi,weighted_mass,p_prime,initial_density\n";
  const auto p_prime = weighted.density();
  const auto init = initial.density();
  for (int b = 0; b < weighted.bins(); ++b) {
    const auto i = static_cast<std::size_t>(b);
    out << weighted.lo + b * weighted.width() << ',' << weighted.lo + (b + 1) * weighted.width() << ','
        << weighted.mass[i] << ',' << p_prime[i] << ',' << init[i] << '\n';
  }
}

void write_scatter(const BinnedScatter& s, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "bin_center,count,mean_probability,max_probability\n";
  for (int b = 0; b < s.probability_sum.bins(); ++b) {
    const auto i = static_cast<std::size_t>(b);
    const double mean = s.counts[i] ? s.probability_sum.mass[i] / static_cast<double>(s.counts[i]) : 0.0;
    out << s.probability_sum.center(b) << ',' << s.counts[i] << ',' << mean << ','
        << s.max_probability[i] << '\n';
  }
}

}  // namespace

std::vector<std::filesystem::path> write_ensemble(const EnsembleResult& result,
                                                  const std::filesystem::path& dir) {
  if (result.records.empty()) throw std::invalid_argument("write_ensemble: empty result");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths{dir / "realizations.csv", dir / "hist_energy.csv",
                                           dir / "hist_xi.csv",      dir / "scatter_energy.csv",
                                           dir / "scatter_xi.csv",   dir / "summary.txt"};
  {
    auto out = open_csv(paths[0]);
    out << "index,instance_seed,sigma,T,n,e_min,e_max,p_min,p_max,most_probable,verified\n";
    for (const auto& r : result.records) {
      out << r.index << ',' << r.instance_seed << ',' << r.sigma << ',' << r.t << ',' << r.n << ','
          << r.e_min << ',' << r.e_max << ',' << r.p_min << ',' << r.p_max << ',' << r.most_probable
          << ',' << (r.verified ? 1 : 0) << '\n';
    }
  }
  write_histograms(result.weighted_energy, result.initial_energy, paths[1]);
  write_histograms(result.weighted_xi, result.initial_xi, paths[2]);
  write_scatter(result.scatter_energy, paths[3]);
  write_scatter(result.scatter_xi, paths[4]);
  {
    auto out = open_csv(paths[5]);
    const auto& c = result.config;
    out << "kind = " << c.kind << '\n'
        << "n_qubits = " << c.n_qubits << '\n'
        << "sigma_eps = " << c.sigma_eps << '\n'
        << "sigma_j = " << c.sigma_j << '\n'
        << "realizations = " << c.realizations << '\n'
        << "schedule = " << to_string(c.policy) << '\n'
        << "seed = " << c.seed << '\n'
        << "bins = " << c.bins << '\n'
        << "mean_p_min = " << result.mean_p_min() << '\n'
        << "mean_p_max = " << result.mean_p_max() << '\n'
        << "mean_tail_probability = " << result.mean_tail_probability() << '\n'
        << "uniform_probability = " << std::ldexp(1.0, -c.n_qubits) << '\n'
        << "verified_fraction = " << result.verified_fraction() << '\n';
  }
  return paths;
}

}  // namespace grover_ising
