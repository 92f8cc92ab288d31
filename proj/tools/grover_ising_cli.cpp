#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "grover_ising/engine.hpp"
#include "grover_ising/experiments.hpp"
#include "grover_ising/figures.hpp"
#include "grover_ising/gmatrix.hpp"
#include "grover_ising/ising.hpp"
#include "grover_ising/seeding.hpp"
#include "grover_ising/spectral.hpp"
#include "grover_ising/tuning.hpp"

namespace fs = std::filesystem;
using namespace grover_ising;

namespace {

struct Options {
  int nq = 10;
  std::vector<int> nq_list;
  double sigma_eps = 1.0;
  double sigma_j = 1.0;
  int realizations = 100;
  std::uint64_t seed = 0;
  std::string schedule = "analytic";
  double t = 0.0;
  int n = 0;
  double e_tar = 0.0;
  std::size_t shots = 1024;
  std::string out = "out";
  int bins = 60;
  int threads = 1;
  int k_points = 20;
  int max_rounds = 10;
  bool degenerate_pair = false;
  bool sample_sigma = false;
  std::string instance;
  double sigma_t = 0.0;
  std::vector<double> sigma_t_list;
  double delta_max = 5.0;
  double delta_step = 0.25;
  bool no_mirror = false;
  bool write_spectrum = false;
  int figure = 0;
};

struct Given {
  const CLI::App& app;
  bool operator()(const std::string& flag) const { return app.count(flag) > 0; }
};

IsingInstance instance_from(const Options& o) {
  if (!o.instance.empty()) return load_instance(o.instance);
  return sample_instance(o.nq, o.sigma_eps, o.sigma_j, derive_seed(o.seed, SeedStream::instance, 0));
}

TuneObjective objective_from(const Options& o, const Given& given) {
  if (given("--e-tar")) return {Objective::nearest_target, o.e_tar};
  return {Objective::max_abs, 0.0};
}

void cmd_generate(const Options& o) {
  fs::create_directories(o.out);
  for (int r = 0; r < o.realizations; ++r) {
    const auto seed = derive_seed(o.seed, SeedStream::instance, static_cast<std::uint64_t>(r));
    const auto instance = sample_instance(o.nq, o.sigma_eps, o.sigma_j, seed);
    const auto stem = "instance_" + std::to_string(r);
    save_instance(instance, fs::path(o.out) / (stem + ".json"));
    if (o.write_spectrum) write_spectrum_csv(enumerate_spectrum(instance), fs::path(o.out) / (stem + "_spectrum.csv"));
  }
  std::cout << "wrote " << o.realizations << " instance(s) to " << o.out << '\n';
}

void cmd_run(const Options& o, const Given& given) {
  const auto instance = instance_from(o);
  const Spectrum spectrum = enumerate_spectrum(instance);
  const int nq = instance.n_qubits();
  ExperimentConfig config;
  config.n_qubits = nq;
  config.policy = parse_schedule_policy(o.schedule);
  config.seed = o.seed;
  config.k_points = o.k_points;
  config.shots = o.shots;
  config.max_rounds = o.max_rounds;
  config.degenerate_pair = o.degenerate_pair;
  if (given("--t")) config.t = o.t;
  if (given("--n")) config.n = o.n;
  const double sigma = o.sample_sigma
                           ? estimate_sigma(instance, required_samples(nq),
                                            derive_seed(o.seed, SeedStream::sigma_sampling, 0))
                                 .sigma_hat
                           : spectrum.stddev();
  const auto schedule =
      ensemble_schedule(config, spectrum.energies(), sigma, derive_seed(o.seed, SeedStream::feedback, 0));
  const auto result = run(std::vector<double>(spectrum.energies().begin(), spectrum.energies().end()),
                          schedule, TraceMode::summary);

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_trace_csv(result.trace, dir / "trace.csv");
  write_snapshot_csv(result.final_state, dir / "snapshot.csv");
  const auto counts = measure(result.final_state, o.shots, derive_seed(o.seed, SeedStream::measurement, 0));
  {
    std::ofstream out(dir / "measurement.csv");
    out << "bitstring,energy,count\n" << std::setprecision(12);
    for (const auto& [idx, c] : counts) {
      out << to_bitstring(SpinConfiguration{idx}, nq) << ',' << spectrum.energies()[idx] << ',' << c << '\n';
    }
  }
  std::size_t mode = 0, mode_count = 0;
  for (const auto& [idx, c] : counts) {
    if (c > mode_count) {
      mode = idx;
      mode_count = c;
    }
  }
  const auto brute = brute_force_extremes(instance);
  const auto probs = probabilities(result.final_state);
  std::ofstream report(dir / "run.txt");
  report << std::setprecision(12) << "n_qubits = " << nq << '\n'
         << "sigma = " << sigma << '\n'
         << "T = " << schedule.evolution_time << '\n'
         << "n = " << schedule.iterations << '\n'
         << "origin = " << to_string(schedule.origin) << '\n'
         << "p_min_state = " << probs[spectrum.argmin()] << '\n'
         << "p_max_state = " << probs[spectrum.argmax()] << '\n'
         << "most_frequent = " << to_bitstring(SpinConfiguration{mode}, nq) << '\n'
         << "brute_force_argmin = " << brute.argmin_bits << '\n'
         << "brute_force_argmax = " << brute.argmax_bits << '\n'
         << "verified = " << (mode == brute.argmin || mode == brute.argmax ? "true" : "false") << '\n';
  std::cout << "T = " << schedule.evolution_time << ", n = " << schedule.iterations
            << ", P(E_min) + P(E_max) = " << probs[spectrum.argmin()] + probs[spectrum.argmax()]
            << ", most frequent = " << to_bitstring(SpinConfiguration{mode}, nq) << '\n';
}

void cmd_ensemble(const Options& o, const Given& given) {
  ExperimentConfig config;
  config.n_qubits = o.nq;
  config.sigma_eps = o.sigma_eps;
  config.sigma_j = o.sigma_j;
  config.realizations = o.realizations;
  config.policy = parse_schedule_policy(o.schedule);
  config.seed = o.seed;
  config.out_dir = o.out;
  config.bins = o.bins;
  config.threads = o.threads;
  config.k_points = o.k_points;
  config.shots = o.shots;
  config.max_rounds = o.max_rounds;
  config.degenerate_pair = o.degenerate_pair;
  config.sample_sigma = o.sample_sigma;
  if (given("--t")) config.t = o.t;
  if (given("--n")) config.n = o.n;
  if (given("--e-tar")) config.grid_objective = {Objective::nearest_target, o.e_tar};
  const auto result = run_ensemble(config);
  write_ensemble(result, config.out_dir);
  std::cout << "mean P(xi=0)+P(xi=1) = " << result.mean_tail_probability()
            << ", verified fraction = " << result.verified_fraction() << '\n';
}

void cmd_tune(const Options& o, const Given& given) {
  const auto instance = instance_from(o);
  const Spectrum spectrum = enumerate_spectrum(instance);
  const int nq = instance.n_qubits();
  const auto objective = objective_from(o, given);
  const auto policy = parse_schedule_policy(o.schedule == "analytic" ? "grid" : o.schedule);
  TuneReport report;
  if (policy == SchedulePolicy::feedback) {
    FeedbackOptions options;
    options.n_shots = o.shots;
    options.max_rounds = o.max_rounds;
    options.seed = o.seed;
    report = feedback_tune(instance, objective, options);
  } else {
    const double sigma = spectrum.stddev();
    const SpectralModel model(sigma, nq);
    const int n = given("--n") ? o.n : optimal_iterations(model.n_states(), o.degenerate_pair);
    if (objective.kind == Objective::nearest_target) {
      TargetModeOptions options;
      options.k_points = o.k_points;
      options.threads = o.threads;
      const auto target = target_energy_mode(spectrum.energies(), o.e_tar, n, sigma, options);
      report = target.tune;
      std::cout << "band probability = " << target.band_probability << '\n';
      for (const auto& h : target.harmonics) {
        std::cout << "harmonic " << h.order << ": E = " << h.energy << ", P = " << h.probability << '\n';
      }
    } else {
      const double t_star = optimal_time(model);
      report = grid_tune(spectrum.energies(), default_window(t_star, sigma), o.k_points, n, objective,
                         t_star, o.threads);
    }
  }
  fs::create_directories(o.out);
  write_tune_report(report, fs::path(o.out) / "tune_report.txt");
  write_tune_history_csv(report, fs::path(o.out) / "tune_history.csv");
  for (const auto& e : report.events) std::cerr << "note: " << e << '\n';
  std::cout << "T_opt = " << report.t_opt << " (T* = " << report.t_star_analytic
            << "), target probability = " << report.target_probability << '\n';
}

void cmd_gap_study(const Options& o, const Given& given) {
  GapStudyConfig config;
  config.realizations = o.realizations;
  config.seed = o.seed;
  config.keep_mirror = !o.no_mirror;
  if (given("--sigma-t")) config.sigma_t = o.sigma_t;
  if (!(o.delta_step > 0.0)) throw std::invalid_argument("--delta-step must be positive");
  for (double d = 0.0; d <= o.delta_max + 1e-9; d += o.delta_step) config.delta_grid.push_back(d);
  const auto sizes = o.nq_list.empty() ? std::vector<int>{o.nq} : o.nq_list;
  fs::create_directories(o.out);
  FigureTable table{"gap_study", {"nq", "delta", "p_success_mean", "p_success_stderr"}, {}};
  for (int nq : sizes) {
    config.n_qubits = nq;
    for (const auto& r : gap_study(config, o.threads)) {
      table.add_row({static_cast<double>(r.n_qubits), r.delta, r.p_success_mean, r.p_success_stderr});
    }
  }
  write_table_csv(table, fs::path(o.out) / "gap_study.csv");
  std::cout << "wrote " << (fs::path(o.out) / "gap_study.csv").string() << '\n';
}

void cmd_figure(const Options& o, const Given& given) {
  FigureOptions f;
  if (given("--nq")) f.n_qubits = o.nq;
  f.n_qubits_list = o.nq_list;
  if (given("--realizations")) f.realizations = o.realizations;
  f.sigma_eps = o.sigma_eps;
  f.sigma_j = o.sigma_j;
  f.seed = o.seed;
  f.threads = o.threads;
  f.bins = o.bins;
  f.k_points = o.k_points;
  f.sigma_t_list = o.sigma_t_list;
  if (given("--sigma-t")) f.sigma_t = o.sigma_t;
  if (given("--e-tar")) f.e_tar = o.e_tar;
  if (given("--n")) f.n = o.n;
  const auto bundle = compute_figure(o.figure, f);
  for (const auto& p : emit_figure(bundle, o.out)) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grover search on Ising spectra: simulation, tuning and figure reproduction"};
  app.set_config("--config", "", "Read options from a key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--nq", o.nq, "Number of qubits")->check(CLI::Range(1, kDefaultMaxQubits));
  app.add_option("--nq-list", o.nq_list, "Qubit numbers for multi-size studies");
  app.add_option("--sigma-eps", o.sigma_eps, "Standard deviation of the local fields");
  app.add_option("--sigma-j", o.sigma_j, "Standard deviation of the couplings");
  app.add_option("--realizations", o.realizations, "Number of disorder realizations");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--schedule", o.schedule, "Schedule policy")
      ->check(CLI::IsMember({"analytic", "grid", "feedback"}));
  app.add_option("--t", o.t, "Fixed evolution time T (default T*)");
  app.add_option("--n", o.n, "Fixed number of Grover iterations (default n*)");
  app.add_option("--e-tar", o.e_tar, "Target energy (nearest-target mode)");
  app.add_option("--shots", o.shots, "Measurement shots");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--bins", o.bins, "Histogram bins");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--k", o.k_points, "Grid points for T tuning");
  app.add_option("--max-rounds", o.max_rounds, "Feedback rounds");
  app.add_flag("--degenerate-pair", o.degenerate_pair, "Use n* = round(pi/4 sqrt(N_s/2))");
  app.add_flag("--sample-sigma", o.sample_sigma, "Estimate sigma from sampled bitstrings");
  app.add_option("--instance", o.instance, "Instance JSON file (run, tune)");
  app.add_option("--sigma-t", o.sigma_t, "Disorder level sigma*T (gap-study, figure 4)");
  app.add_option("--sigma-t-list", o.sigma_t_list, "Disorder levels sigma*T (figure 3)");
  app.add_option("--delta-max", o.delta_max, "Largest planted gap delta (gap-study)");
  app.add_option("--delta-step", o.delta_step, "Planted gap step (gap-study)");
  app.add_flag("--no-mirror", o.no_mirror, "Drop the mirrored +|E_min| level (gap-study)");
  app.add_flag("--spectrum", o.write_spectrum, "Also write each spectrum as CSV (generate)");

  auto* generate = app.add_subcommand("generate", "Sample instances and save them as JSON");
  auto* run_cmd = app.add_subcommand("run", "Run one realization and write trace, snapshot and measurements");
  auto* ensemble = app.add_subcommand("ensemble", "Run a disorder ensemble and write CSV aggregates");
  auto* tune = app.add_subcommand("tune", "Grid or feedback tuning of T on one instance");
  auto* gap = app.add_subcommand("gap-study", "Success probability vs planted gap");
  auto* figure = app.add_subcommand("figure", "Compute a figure analogue (CSV + SVG)");
  figure->add_option("number", o.figure, "Figure number")->required()->check(CLI::Range(kFirstFigure, kLastFigure));

  CLI11_PARSE(app, argc, argv);
  const Given given{app};
  try {
    if (*generate) cmd_generate(o);
    if (*run_cmd) cmd_run(o, given);
    if (*ensemble) cmd_ensemble(o, given);
    if (*tune) cmd_tune(o, given);
    if (*gap) cmd_gap_study(o, given);
    if (*figure) cmd_figure(o, given);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
