#include "grover_ising/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "grover_ising/engine.hpp"
#include "grover_ising/gmatrix.hpp"
#include "grover_ising/ising.hpp"
#include "grover_ising/parallel.hpp"
#include "grover_ising/seeding.hpp"
#include "grover_ising/spectral.hpp"
#include "grover_ising/tuning.hpp"

namespace grover_ising {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr out;
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (count - 1.0) / count);
  }
  return out;
}

std::vector<double> column(const FigureTable& table, std::size_t c) {
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) out.push_back(row[c]);
  return out;
}

int size_or(const FigureOptions& o, int fallback) { return o.n_qubits.value_or(fallback); }
int count_or(const FigureOptions& o, int fallback) { return o.realizations.value_or(fallback); }

std::vector<int> sizes_or(const FigureOptions& o, std::vector<int> fallback) {
  if (!o.n_qubits_list.empty()) return o.n_qubits_list;
  if (o.n_qubits) return {*o.n_qubits};
  return fallback;
}

void require_positive_count(int realizations) {
  if (realizations < 1) throw std::invalid_argument("figure: realizations must be >= 1");
}

Spectrum instance_spectrum(const FigureOptions& o, int nq, std::size_t r) {
  return enumerate_spectrum(
      sample_instance(nq, o.sigma_eps, o.sigma_j, derive_seed(o.seed, SeedStream::instance, r)));
}

FigureBundle figure2(const FigureOptions& o) {
  const int nq = size_or(o, 10);
  const Spectrum spectrum = instance_spectrum(o, nq, 0);
  const SpectralModel model(spectrum.stddev(), nq);
  const double t = optimal_time(model);
  const int n = o.n.value_or(optimal_iterations(model.n_states(), false));
  std::vector<double> levels(spectrum.energies().begin(), spectrum.energies().end());
  const auto first = probabilities(run(levels, GroverSchedule(t, 1)).final_state);
  const auto last = probabilities(run(levels, GroverSchedule(t, n)).final_state);

  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return levels[a] < levels[b]; });

  FigureBundle b;
  b.figure = 2;
  FigureTable table{"fig2", {"energy", "p_first", "p_n"}, {}};
  Plot pa{"P_j after one iteration, N_q = " + std::to_string(nq), "E_j", "P_j", true, {}, {}};
  Plot pb{"P_j after n = " + std::to_string(n) + " iterations", "E_j", "P_j", true, {}, {}};
  PlotSeries sa{"n = 1", {}, {}, SeriesStyle::line};
  PlotSeries sb{"n = " + std::to_string(n), {}, {}, SeriesStyle::line};
  for (auto j : order) {
    table.add_row({levels[j], first[j], last[j]});
    sa.x.push_back(levels[j]);
    sa.y.push_back(first[j]);
    sb.x.push_back(levels[j]);
    sb.y.push_back(last[j]);
  }
  pa.series.push_back(sa);
  pb.series.push_back(sb);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig2a", std::move(pa));
  b.plots.emplace_back("fig2b", std::move(pb));
  b.note("n_qubits", nq);
  b.note("T", t);
  b.note("n", n);
  b.note("uniform_probability", std::ldexp(1.0, -nq));
  return b;
}

FigureBundle figure3(const FigureOptions& o) {
  const auto sizes = sizes_or(o, {10, 14, 18});
  const auto sigma_ts =
      o.sigma_t_list.empty() ? std::vector<double>{0.01 * kPi, 0.1 * kPi, 0.25 * kPi} : o.sigma_t_list;
  const int realizations = count_or(o, 400);
  require_positive_count(realizations);

  FigureBundle b;
  b.figure = 3;
  FigureTable table{"fig3", {"sigmaT", "n", "p_success", "nq", "p_success_stderr"}, {}};
  Plot plot{"Success probability, bulk N(0, sigma), E_ext T = pi", "n", "P_pm(n)", false, {}, {}};
  for (int nq : sizes) {
    for (double st : sigma_ts) {
      SuccessStudyConfig config;
      config.n_qubits = nq;
      config.sigma_t = st;
      config.realizations = realizations;
      config.seed = o.seed;
      const auto rows = success_study(config, o.threads);
      PlotSeries s{"Nq=" + std::to_string(nq) + " sT/pi=" + format_number(st / kPi), {}, {},
                   SeriesStyle::line};
      double peak = -1.0;
      int peak_n = 0;
      for (const auto& r : rows) {
        table.add_row({st, static_cast<double>(r.n), r.p_success_mean, static_cast<double>(nq),
                       r.p_success_stderr});
        s.x.push_back(r.n);
        s.y.push_back(r.p_success_mean);
        if (r.p_success_mean > peak) {
          peak = r.p_success_mean;
          peak_n = r.n;
        }
      }
      plot.series.push_back(std::move(s));
      const std::string key = "nq" + std::to_string(nq) + "_sigmaT" + format_number(st);
      b.note(key + "_peak", peak);
      b.note(key + "_peak_n", peak_n);
    }
    b.note("nq" + std::to_string(nq) + "_n_star", optimal_iterations(std::ldexp(1.0, nq), true));
  }
  b.note("realizations", realizations);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig3", std::move(plot));
  return b;
}

FigureBundle figure4(const FigureOptions& o) {
  const auto sizes = sizes_or(o, {10, 14, 18});
  const int realizations = count_or(o, 100);
  require_positive_count(realizations);
  std::vector<double> deltas;
  for (int i = 0; i <= 20; ++i) deltas.push_back(0.25 * i);

  FigureBundle b;
  b.figure = 4;
  FigureTable table{"fig4", {"nq", "delta", "p_success_mean", "p_success_stderr"}, {}};
  Plot plot{"Success probability at n* vs planted gap", "delta = Delta T n* / pi", "P_pm(n*)", false,
            {}, {2.0}};
  for (int nq : sizes) {
    GapStudyConfig config;
    config.n_qubits = nq;
    config.delta_grid = deltas;
    config.realizations = realizations;
    config.seed = o.seed;
    if (o.sigma_t) config.sigma_t = *o.sigma_t;
    PlotSeries s{"N_q = " + std::to_string(nq), {}, {}, SeriesStyle::line};
    for (const auto& r : gap_study(config, o.threads)) {
      table.add_row({static_cast<double>(r.n_qubits), r.delta, r.p_success_mean, r.p_success_stderr});
      s.x.push_back(r.delta);
      s.y.push_back(r.p_success_mean);
    }
    plot.series.push_back(std::move(s));
    b.note("sigma_t", config.sigma_t);
  }
  b.note("realizations", realizations);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig4", std::move(plot));
  return b;
}

FigureBundle figure5(const FigureOptions& o) {
  std::vector<int> fallback;
  for (int nq = 6; nq <= 14; ++nq) fallback.push_back(nq);
  const auto sizes = sizes_or(o, fallback);
  const int realizations = count_or(o, 10000);
  require_positive_count(realizations);

  FigureBundle b;
  b.figure = 5;
  FigureTable table{"fig5", {"nq", "mean_gap", "gap_estimate", "gap_stderr", "quantile_gap"}, {}};
  Plot plot{"Ground-state gap", "N_q", "Delta", false, {}, {}};
  PlotSeries numeric{"ensemble mean", {}, {}, SeriesStyle::points};
  PlotSeries estimate{"sigma / sqrt(2 ln N_s)", {}, {}, SeriesStyle::line};
  for (int nq : sizes) {
    std::vector<double> gaps(static_cast<std::size_t>(realizations));
    parallel_for(gaps.size(), o.threads, [&](std::size_t r) { gaps[r] = instance_spectrum(o, nq, r).gap(); });
    const auto stats = mean_stderr(gaps);
    const SpectralModel model(ensemble_sigma(nq, o.sigma_eps, o.sigma_j), nq);
    table.add_row({static_cast<double>(nq), stats.mean, gap_estimate(model), stats.stderr_,
                   quantile_gap(model)});
    numeric.x.push_back(nq);
    numeric.y.push_back(stats.mean);
    estimate.x.push_back(nq);
    estimate.y.push_back(gap_estimate(model));
  }
  plot.series = {numeric, estimate};
  b.note("realizations", realizations);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig5", std::move(plot));
  return b;
}

ExperimentConfig ensemble_config(const FigureOptions& o, SchedulePolicy policy) {
  ExperimentConfig c;
  c.kind = policy == SchedulePolicy::grid ? "tuned" : "fixed";
  c.n_qubits = size_or(o, 13);
  c.sigma_eps = o.sigma_eps;
  c.sigma_j = o.sigma_j;
  c.realizations = count_or(o, 400);
  c.policy = policy;
  c.seed = o.seed;
  c.bins = o.bins;
  c.threads = o.threads;
  c.k_points = o.k_points;
  c.n = o.n;
  return c;
}

FigureBundle figure10(const FigureOptions& o) {
  std::vector<int> fallback;
  for (int nq = 6; nq <= 12; ++nq) fallback.push_back(nq);
  const auto sizes = sizes_or(o, fallback);
  const int realizations = count_or(o, 100);
  require_positive_count(realizations);

  FigureBundle b;
  b.figure = 10;
  FigureTable table{"fig10",
                    {"nq", "mean_t_opt", "t_star_numeric", "t_star_asymptotic", "t_opt_stderr",
                     "mean_t_star_realization"},
                    {}};
  Plot plot{"Optimal evolution time", "N_q", "T", false, {}, {}};
  PlotSeries s1{"mean T_opt", {}, {}, SeriesStyle::points};
  PlotSeries s2{"T* (erfc)", {}, {}, SeriesStyle::line};
  PlotSeries s3{"T* (asymptotic)", {}, {}, SeriesStyle::dashed};
  for (int nq : sizes) {
    std::vector<double> t_opt(static_cast<std::size_t>(realizations));
    std::vector<double> t_star(t_opt.size());
    parallel_for(t_opt.size(), o.threads, [&](std::size_t r) {
      const Spectrum spectrum = instance_spectrum(o, nq, r);
      const SpectralModel model(spectrum.stddev(), nq);
      t_star[r] = optimal_time(model);
      const int n = optimal_iterations(model.n_states(), false);
      t_opt[r] = grid_tune(spectrum.energies(), default_window(t_star[r], model.sigma), o.k_points, n,
                           TuneObjective{Objective::max_abs, 0.0}, t_star[r])
                     .t_opt;
    });
    const SpectralModel ensemble(ensemble_sigma(nq, o.sigma_eps, o.sigma_j), nq);
    const auto stats = mean_stderr(t_opt);
    table.add_row({static_cast<double>(nq), stats.mean, optimal_time(ensemble), asymptotic_time(ensemble),
                   stats.stderr_, mean_stderr(t_star).mean});
    s1.x.push_back(nq);
    s1.y.push_back(stats.mean);
    s2.x.push_back(nq);
    s2.y.push_back(optimal_time(ensemble));
    s3.x.push_back(nq);
    s3.y.push_back(asymptotic_time(ensemble));
  }
  plot.series = {s1, s2, s3};
  b.note("realizations", realizations);
  b.note("k_points", o.k_points);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig10", std::move(plot));
  return b;
}

FigureBundle figure11(const FigureOptions& o) {
  const int nq = size_or(o, 6);
  const int realizations = count_or(o, 100);
  require_positive_count(realizations);
  std::vector<TuneReport> reports(static_cast<std::size_t>(realizations));
  parallel_for(reports.size(), o.threads, [&](std::size_t r) {
    const Spectrum spectrum = instance_spectrum(o, nq, r);
    const SpectralModel model(spectrum.stddev(), nq);
    const double t_star = optimal_time(model);
    reports[r] = grid_tune(spectrum.energies(), default_window(t_star, model.sigma), o.k_points,
                           optimal_iterations(model.n_states(), false),
                           TuneObjective{Objective::max_abs, 0.0}, t_star);
  });

  FigureBundle b;
  b.figure = 11;
  FigureTable scan{"fig11_scan", {"realization", "T", "probability"}, {}};
  FigureTable opt{"fig11_opt", {"realization", "t_opt", "p_opt", "t_star"}, {}};
  Plot plot{"P(max |E_j| state) vs T, N_q = " + std::to_string(nq), "T", "P", false, {}, {}};
  PlotSeries dots{"T_opt", {}, {}, SeriesStyle::points};
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    PlotSeries s{"realization " + std::to_string(r), {}, {}, SeriesStyle::line};
    for (const auto& h : rep.history) {
      scan.add_row({static_cast<double>(r), h.t, h.probability});
      s.x.push_back(h.t);
      s.y.push_back(h.probability);
    }
    opt.add_row({static_cast<double>(r), rep.t_opt, rep.target_probability, rep.t_star_analytic});
    dots.x.push_back(rep.t_opt);
    dots.y.push_back(rep.target_probability);
    if (r < 6) plot.series.push_back(std::move(s));
  }
  plot.series.push_back(std::move(dots));
  b.note("n_qubits", nq);
  b.note("realizations", realizations);
  b.note("mean_t_opt", mean_stderr(column(opt, 1)).mean);
  b.note("mean_t_star", mean_stderr(column(opt, 3)).mean);
  b.tables.push_back(std::move(scan));
  b.tables.push_back(std::move(opt));
  b.plots.emplace_back("fig11", std::move(plot));
  return b;
}

FigureBundle figure12(const FigureOptions& o) {
  const int nq = size_or(o, 7);
  const int realizations = count_or(o, 50);
  require_positive_count(realizations);
  const int n_star = optimal_iterations(std::ldexp(1.0, nq), false);
  const int n_max = 3 * n_star;
  std::vector<std::vector<double>> curves(static_cast<std::size_t>(realizations));
  parallel_for(curves.size(), o.threads, [&](std::size_t r) {
    const Spectrum spectrum = instance_spectrum(o, nq, r);
    const SpectralModel model(spectrum.stddev(), nq);
    const double t_star = optimal_time(model);
    const TuneObjective objective{Objective::max_abs, 0.0};
    const double t_opt = grid_tune(spectrum.energies(), default_window(t_star, model.sigma), o.k_points,
                                   n_star, objective, t_star)
                             .t_opt;
    curves[r] = scan_iterations(spectrum.energies(), t_opt, n_max, objective);
  });

  FigureBundle b;
  b.figure = 12;
  FigureTable table{"fig12", {"n", "p_mean", "p_stderr"}, {}};
  PlotSeries s{"mean over realizations", {}, {}, SeriesStyle::points};
  for (int n = 0; n <= n_max; ++n) {
    std::vector<double> values;
    for (const auto& c : curves) values.push_back(c[static_cast<std::size_t>(n)]);
    const auto stats = mean_stderr(values);
    table.add_row({static_cast<double>(n), stats.mean, stats.stderr_});
    s.x.push_back(n);
    s.y.push_back(stats.mean);
  }
  int first_peak = -1;
  for (int n = 1; n < n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (s.y[i] >= s.y[i - 1] && s.y[i] > s.y[i + 1]) {
      first_peak = n;
      break;
    }
  }
  Plot plot{"P(max |E_j| state) at T_opt vs n, N_q = " + std::to_string(nq), "n", "P", false, {s},
            {static_cast<double>(n_star)}};
  b.note("n_qubits", nq);
  b.note("realizations", realizations);
  b.note("n_star", n_star);
  b.note("first_peak_n", first_peak);
  b.tables.push_back(std::move(table));
  b.plots.emplace_back("fig12", std::move(plot));
  return b;
}

FigureBundle figure13(const FigureOptions& o) {
  const int nq = size_or(o, 8);
  const int realizations = count_or(o, 400);
  require_positive_count(realizations);
  const auto count = static_cast<std::size_t>(realizations);
  std::vector<Spectrum> spectra;
  spectra.reserve(count);
  for (std::size_t r = 0; r < count; ++r) spectra.push_back(instance_spectrum(o, nq, r));

  double e_tar = 0.0;
  if (o.e_tar) {
    e_tar = *o.e_tar;
  } else {
    std::vector<double> pooled;
    pooled.reserve(count * spectra.front().size());
    for (const auto& s : spectra) pooled.insert(pooled.end(), s.energies().begin(), s.energies().end());
    const double mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / static_cast<double>(pooled.size());
    e_tar = mean - 3.0 * median_absolute_deviation(pooled);
  }

  std::vector<TargetModeReport> reports(count);
  parallel_for(count, o.threads, [&](std::size_t r) {
    const double sigma = spectra[r].stddev();
    TargetModeOptions options;
    options.k_points = o.k_points;
    reports[r] = target_energy_mode(spectra[r].energies(), e_tar,
                                    optimal_iterations(std::ldexp(1.0, nq), false), sigma, options);
  });

  double lo = spectra.front().e_min();
  double hi = spectra.front().e_max();
  for (const auto& s : spectra) {
    lo = std::min(lo, s.e_min());
    hi = std::max(hi, s.e_max());
  }
  Histogram sum(lo, hi, o.bins);
  std::vector<std::size_t> counts(static_cast<std::size_t>(o.bins), 0);
  std::vector<double> peak(static_cast<std::size_t>(o.bins), 0.0);
  for (std::size_t r = 0; r < count; ++r) {
    const auto levels = spectra[r].energies();
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double p = reports[r].final_probabilities[j];
      const double pos = (levels[j] - lo) / sum.width();
      const auto bin = static_cast<std::size_t>(pos <= 0.0 ? 0 : std::min(static_cast<int>(pos), o.bins - 1));
      sum.mass[bin] += p;
      ++counts[bin];
      peak[bin] = std::max(peak[bin], p);
    }
  }

  FigureBundle b;
  b.figure = 13;
  FigureTable table{"fig13", {"bin_center", "count", "mean_probability", "max_probability"}, {}};
  FigureTable per{"fig13_realizations", {"realization", "T", "target_probability", "band_probability"}, {}};
  PlotSeries mean_series{"mean P_j", {}, {}, SeriesStyle::line};
  PlotSeries max_series{"max P_j", {}, {}, SeriesStyle::points};
  for (int bin = 0; bin < o.bins; ++bin) {
    const auto i = static_cast<std::size_t>(bin);
    const double mean = counts[i] ? sum.mass[i] / static_cast<double>(counts[i]) : 0.0;
    table.add_row({sum.center(bin), static_cast<double>(counts[i]), mean, peak[i]});
    mean_series.x.push_back(sum.center(bin));
    mean_series.y.push_back(mean);
    max_series.x.push_back(sum.center(bin));
    max_series.y.push_back(peak[i]);
  }
  std::vector<double> band;
  std::vector<double> target;
  for (std::size_t r = 0; r < count; ++r) {
    per.add_row({static_cast<double>(r), reports[r].tune.t_opt, reports[r].tune.target_probability,
                 reports[r].band_probability});
    band.push_back(reports[r].band_probability);
    target.push_back(reports[r].tune.target_probability);
  }
  std::vector<double> markers{e_tar};
  for (int order : {-3, 3}) markers.push_back(order * e_tar);
  Plot plot{"P_j vs E_j with target energy, N_q = " + std::to_string(nq), "E_j", "P_j", true,
            {mean_series, max_series}, markers};
  b.note("n_qubits", nq);
  b.note("realizations", realizations);
  b.note("e_tar", e_tar);
  b.note("mean_target_probability", mean_stderr(target).mean);
  b.note("mean_band_probability", mean_stderr(band).mean);
  b.note("uniform_probability", std::ldexp(1.0, -nq));
  b.tables.push_back(std::move(table));
  b.tables.push_back(std::move(per));
  b.plots.emplace_back("fig13", std::move(plot));
  return b;
}

}  // namespace

void FigureTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("FigureTable: row width mismatch");
  rows.push_back(std::move(row));
}

void FigureBundle::note(const std::string& key, double value) {
  summary.emplace_back(key, format_number(value));
}

void FigureBundle::note(const std::string& key, const std::string& value) {
  summary.emplace_back(key, value);
}

FigureBundle figure_from_ensemble(const EnsembleResult& result, int figure) {
  if (figure < 6 || figure > 9) throw std::invalid_argument("figure_from_ensemble: figure must be 6..9");
  if (result.records.empty()) throw std::invalid_argument("figure_from_ensemble: empty result");
  const std::string stem = "fig" + std::to_string(figure);
  const std::string when = figure <= 7 ? "T = T*, n = n*" : "tuned T, n = n*";
  FigureBundle b;
  b.figure = figure;
  if (figure == 6 || figure == 8) {
    const std::pair<const BinnedScatter*, const char*> parts[] = {{&result.scatter_energy, "energy"},
                                                                   {&result.scatter_xi, "xi"}};
    for (const auto& [scatter, axis] : parts) {
      FigureTable t{stem + "_" + axis, {"bin_center", "count", "mean_probability", "max_probability"}, {}};
      PlotSeries mean_series{"mean P_j", {}, {}, SeriesStyle::line};
      PlotSeries max_series{"max P_j", {}, {}, SeriesStyle::points};
      for (int bin = 0; bin < scatter->probability_sum.bins(); ++bin) {
        const auto i = static_cast<std::size_t>(bin);
        const double c = static_cast<double>(scatter->counts[i]);
        const double mean = c > 0 ? scatter->probability_sum.mass[i] / c : 0.0;
        const double x = scatter->probability_sum.center(bin);
        t.add_row({x, c, mean, scatter->max_probability[i]});
        mean_series.x.push_back(x);
        mean_series.y.push_back(mean);
        max_series.x.push_back(x);
        max_series.y.push_back(scatter->max_probability[i]);
      }
      const std::string x_label = std::string(axis) == "xi" ? "xi_j" : "E_j";
      b.plots.emplace_back(t.name, Plot{"P_j vs " + x_label + " (" + when + ")", x_label, "P_j", true,
                                        {mean_series, max_series}, {}});
      b.tables.push_back(std::move(t));
    }
  } else {
    const std::tuple<const Histogram*, const Histogram*, const char*> parts[] = {
        {&result.weighted_energy, &result.initial_energy, "energy"},
        {&result.weighted_xi, &result.initial_xi, "xi"}};
    for (const auto& [weighted, initial, axis] : parts) {
      FigureTable t{stem + "_" + axis, {"bin_lo", "bin_hi", "p_prime", "initial_density"}, {}};
      const auto p_prime = weighted->density();
      const auto init = initial->density();
      PlotSeries s1{"P'", {}, {}, SeriesStyle::steps};
      PlotSeries s2{"initial", {}, {}, SeriesStyle::dashed};
      for (int bin = 0; bin < weighted->bins(); ++bin) {
        const auto i = static_cast<std::size_t>(bin);
        t.add_row({weighted->lo + bin * weighted->width(), weighted->lo + (bin + 1) * weighted->width(),
                   p_prime[i], init[i]});
        s1.x.push_back(weighted->center(bin));
        s1.y.push_back(p_prime[i]);
        s2.x.push_back(weighted->center(bin));
        s2.y.push_back(init[i]);
      }
      const std::string x_label = std::string(axis) == "xi" ? "xi" : "E";
      b.plots.emplace_back(t.name, Plot{"P'(" + x_label + ") (" + when + ")", x_label, "density", true,
                                        {s1, s2}, {}});
      b.tables.push_back(std::move(t));
    }
  }
  const auto& c = result.config;
  b.note("n_qubits", c.n_qubits);
  b.note("realizations", c.realizations);
  b.note("schedule", std::string(to_string(c.policy)));
  b.note("mean_p_min", result.mean_p_min());
  b.note("mean_p_max", result.mean_p_max());
  b.note("mean_tail_probability", result.mean_tail_probability());
  b.note("uniform_probability", std::ldexp(1.0, -c.n_qubits));
  b.note("verified_fraction", result.verified_fraction());
  return b;
}

FigureBundle compute_figure(int figure, const FigureOptions& options) {
  switch (figure) {
    case 2: return figure2(options);
    case 3: return figure3(options);
    case 4: return figure4(options);
    case 5: return figure5(options);
    case 6:
    case 7: return figure_from_ensemble(run_ensemble(ensemble_config(options, SchedulePolicy::analytic)), figure);
    case 8:
    case 9: return figure_from_ensemble(run_ensemble(ensemble_config(options, SchedulePolicy::grid)), figure);
    case 10: return figure10(options);
    case 11: return figure11(options);
    case 12: return figure12(options);
    case 13: return figure13(options);
    default: break;
  }
  throw std::invalid_argument("compute_figure: no analogue for figure " + std::to_string(figure) +
                              " (available: 2..13)");
}

void write_table_csv(const FigureTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::filesystem::path> emit_figure(const FigureBundle& bundle,
                                               const std::filesystem::path& dir) {
  if (bundle.tables.empty()) throw std::invalid_argument("emit_figure: figure has no data");
  for (const auto& t : bundle.tables) {
    if (t.rows.empty()) throw std::invalid_argument("emit_figure: table " + t.name + " is empty");
  }
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& t : bundle.tables) {
      written.push_back(dir / (t.name + ".csv"));
      write_table_csv(t, written.back());
    }
    for (const auto& [stem, plot] : bundle.plots) {
      written.push_back(dir / (stem + ".svg"));
      write_svg(plot, written.back());
    }
    written.push_back(dir / ("fig" + std::to_string(bundle.figure) + "_summary.txt"));
    std::ofstream out(written.back());
    if (!out) throw std::runtime_error("cannot open " + written.back().string() + " for writing");
    for (const auto& [key, value] : bundle.summary) out << key << " = " << value << '\n';
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : written) std::filesystem::remove(p, ignored);
    throw;
  }
  return written;
}

}  // namespace grover_ising
