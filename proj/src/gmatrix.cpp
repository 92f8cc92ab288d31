#include "grover_ising/gmatrix.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "grover_ising/engine.hpp"
#include "grover_ising/parallel.hpp"
#include "grover_ising/seeding.hpp"
#include "grover_ising/spectral.hpp"

namespace grover_ising {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::vector<double> bulk_levels(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> levels(count);
  for (auto& e : levels) e = normal(rng);
  return levels;
}

}  // namespace

OverlapSequence gaussian_overlaps(double sigma, double t, int n_max) {
  if (n_max < 0) throw std::invalid_argument("gaussian_overlaps: n_max must be >= 0");
  OverlapSequence seq{std::vector<Complex>(static_cast<std::size_t>(n_max) + 1),
                      OverlapSource::gaussian_analytic};
  const double st = sigma * t;
  for (int k = 0; k <= n_max; ++k) {
    seq.values[static_cast<std::size_t>(k)] = std::exp(-0.5 * k * k * st * st);
  }
  return seq;
}

std::vector<Complex> phase_power_sums(std::span<const double> energies, double t, int n_max) {
  if (n_max < 0) throw std::invalid_argument("phase_power_sums: n_max must be >= 0");
  const auto terms = static_cast<std::size_t>(n_max) + 1;
  std::vector<Complex> sums(terms, Complex{0.0, 0.0});
  // Blocked so the running powers of one block stay in cache across k.
  constexpr std::size_t kBlock = 256;
  std::vector<double> zr(kBlock), zi(kBlock), wr(kBlock), wi(kBlock);
  for (std::size_t base = 0; base < energies.size(); base += kBlock) {
    const std::size_t len = std::min(kBlock, energies.size() - base);
    for (std::size_t j = 0; j < len; ++j) {
      const double angle = energies[base + j] * t;
      zr[j] = std::cos(angle);
      zi[j] = -std::sin(angle);
      wr[j] = 1.0;
      wi[j] = 0.0;
    }
    for (std::size_t k = 0; k < terms; ++k) {
      double sr = 0.0;
      double si = 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        sr += wr[j];
        si += wi[j];
        const double nr = wr[j] * zr[j] - wi[j] * zi[j];
        const double ni = wr[j] * zi[j] + wi[j] * zr[j];
        wr[j] = nr;
        wi[j] = ni;
      }
      sums[k] += Complex{sr, si};
    }
  }
  return sums;
}

OverlapSequence empirical_overlaps(std::span<const double> energies, double t, int n_max,
                                   std::pair<std::size_t, std::size_t> excluded) {
  if (energies.size() < 3) throw std::invalid_argument("empirical_overlaps: need >= 3 levels");
  if (excluded.first == excluded.second || excluded.first >= energies.size() ||
      excluded.second >= energies.size()) {
    throw std::invalid_argument("empirical_overlaps: excluded pair must be two distinct levels");
  }
  std::vector<double> bulk;
  bulk.reserve(energies.size() - 2);
  for (std::size_t j = 0; j < energies.size(); ++j) {
    if (j != excluded.first && j != excluded.second) bulk.push_back(energies[j]);
  }
  auto sums = phase_power_sums(bulk, t, n_max);
  const double scale = 1.0 / static_cast<double>(bulk.size());
  for (auto& s : sums) s *= scale;
  sums[0] = 1.0;
  return {std::move(sums), OverlapSource::empirical_spectrum};
}

GMatrix::GMatrix(double n_states, const OverlapSequence& overlaps, int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("GMatrix: n_max must be >= 0");
  if (!(n_states > 2.0)) throw std::invalid_argument("GMatrix: need N_s > 2");
  if (overlaps.horizon() < n_max + 1) {
    throw std::invalid_argument("GMatrix: overlaps must extend to k = n_max + 1");
  }
  a0_ = std::sqrt(2.0 / n_states);
  b0_ = std::sqrt(1.0 - a0_ * a0_);
  const auto dim = static_cast<std::size_t>(n_max) + 2;
  row0_.resize(dim);
  row1_.resize(dim);
  row0_[0] = 1.0 - 2.0 * a0_ * a0_;
  row1_[0] = -2.0 * a0_ * b0_;
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    const Complex ov = overlaps.values[k + 1];
    row0_[k + 1] = 2.0 * a0_ * b0_ * ov;
    row1_[k + 1] = 2.0 * b0_ * b0_ * ov;
  }
}

Complex GMatrix::entry(int row, int col) const {
  if (row < 0 || col < 0 || row >= dimension() || col >= dimension()) {
    throw std::out_of_range("GMatrix::entry: index out of range");
  }
  if (row == 0) return row0_[static_cast<std::size_t>(col)];
  if (row == 1) return row1_[static_cast<std::size_t>(col)];
  return col == row - 1 ? Complex{-1.0, 0.0} : Complex{0.0, 0.0};
}

void GMatrix::apply(std::span<const Complex> in, std::size_t active,
                    std::span<Complex> out) const {
  const auto dim = static_cast<std::size_t>(dimension());
  if (active > dim || active > in.size()) throw std::out_of_range("GMatrix::apply: bad width");
  const std::size_t produced = std::min(active + 1, dim);
  if (out.size() < produced) throw std::out_of_range("GMatrix::apply: output too short");
  Complex top{0.0, 0.0};
  Complex second{0.0, 0.0};
  for (std::size_t c = 0; c < active; ++c) {
    top += row0_[c] * in[c];
    second += row1_[c] * in[c];
  }
  out[0] = top;
  if (produced > 1) out[1] = second;
  for (std::size_t r = 2; r < produced; ++r) out[r] = -in[r - 1];
}

GMatrix build_gmatrix(double n_states, const OverlapSequence& overlaps, int n_max) {
  return GMatrix(n_states, overlaps, n_max);
}

ReducedState initial_reduced_state(const GMatrix& g) {
  return ReducedState{Complex{g.a0(), 0.0}, {Complex{g.b0(), 0.0}}, 0};
}

namespace {

template <typename Visit>
std::vector<Complex> iterate(const GMatrix& g, int steps, Visit&& visit) {
  if (steps < 0) throw std::invalid_argument("evolve: steps must be >= 0");
  if (steps > g.n_max()) {
    throw std::out_of_range("evolve: steps exceed the overlap horizon of the G matrix");
  }
  const auto width = static_cast<std::size_t>(steps) + 2;
  std::vector<Complex> current(width, Complex{0.0, 0.0});
  std::vector<Complex> next(width, Complex{0.0, 0.0});
  current[0] = g.a0();
  current[1] = g.b0();
  std::size_t active = 2;
  visit(current);
  for (int n = 1; n <= steps; ++n) {
    g.apply(current, active, next);
    ++active;
    std::swap(current, next);
    visit(current);
  }
  current.resize(active);
  return current;
}

}  // namespace

ReducedState evolve_state(const GMatrix& g, int steps) {
  auto v = iterate(g, steps, [](const std::vector<Complex>&) {});
  ReducedState state;
  state.a_pm = v[0];
  state.b.assign(v.begin() + 1, v.end());
  state.step = steps;
  return state;
}

std::vector<double> evolve(const GMatrix& g, int steps) {
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(std::max(steps, 0)) + 1);
  iterate(g, steps, [&](const std::vector<Complex>& v) { curve.push_back(std::norm(v[0])); });
  return curve;
}

double gram_norm(const ReducedState& state, const OverlapSequence& overlaps) {
  const std::size_t m = state.b.size();
  if (static_cast<std::size_t>(overlaps.horizon()) + 1 < m) {
    throw std::invalid_argument("gram_norm: overlaps too short for this state");
  }
  Complex quad{0.0, 0.0};
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      // <k|l> = <0|U^(l-k)|0>, conjugated for l < k.
      const Complex omega = l >= k ? overlaps.values[l - k] : std::conj(overlaps.values[k - l]);
      quad += std::conj(state.b[k]) * omega * state.b[l];
    }
  }
  return std::norm(state.a_pm) + quad.real();
}

std::vector<double> planted_gap_spectrum(int n_qubits, double e_ext, double gap, bool keep_mirror,
                                         std::uint64_t seed) {
  if (n_qubits < 2 || n_qubits > 30) {
    throw std::invalid_argument("planted_gap_spectrum: n_qubits must be in [2, 30]");
  }
  const std::size_t size = std::size_t{1} << n_qubits;
  const std::size_t fixed = keep_mirror ? 3 : 2;
  const auto bulk = bulk_levels(size - fixed, seed);
  std::vector<double> levels;
  levels.reserve(size);
  levels.push_back(-e_ext);
  if (keep_mirror) {
    levels.push_back(e_ext);
    levels.push_back(-e_ext + gap);
  } else {
    levels.push_back(bulk.front());
    levels.push_back(-e_ext + gap);
  }
  levels.insert(levels.end(), keep_mirror ? bulk.begin() : bulk.begin() + 1, bulk.end());
  return levels;
}

std::vector<GapStudyRow> gap_study(const GapStudyConfig& config, int threads) {
  if (config.n_qubits < 2 || config.n_qubits > 30) {
    throw std::invalid_argument("gap_study: n_qubits must be in [2, 30]");
  }
  if (config.realizations < 1) throw std::invalid_argument("gap_study: need >= 1 realization");
  if (config.delta_grid.empty()) throw std::invalid_argument("gap_study: empty delta grid");
  if (!(config.sigma_t > 0.0)) throw std::invalid_argument("gap_study: sigma_t must be > 0");

  const double n_states = std::ldexp(1.0, config.n_qubits);
  const std::size_t size = std::size_t{1} << config.n_qubits;
  const double t = config.sigma_t;
  const double e_ext = kPi / t;
  const int n_star = optimal_iterations(n_states, config.keep_mirror);
  const std::size_t deltas = config.delta_grid.size();

  std::vector<double> success(static_cast<std::size_t>(config.realizations) * deltas);
  parallel_for(static_cast<std::size_t>(config.realizations), threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(config.seed, SeedStream::synthetic_spectrum, r);
    double* out = success.data() + r * deltas;
    if (config.keep_mirror) {
      // The bulk is shared by every delta; only the planted level changes.
      const auto bulk = bulk_levels(size - 3, seed);
      const auto bulk_sums = phase_power_sums(bulk, t, n_star + 1);
      const double scale = 1.0 / static_cast<double>(size - 2);
      for (std::size_t d = 0; d < deltas; ++d) {
        const double gap = config.delta_grid[d] * kPi / (t * n_star);
        const double planted = -e_ext + gap;
        OverlapSequence ov{std::vector<Complex>(bulk_sums.size()),
                           OverlapSource::empirical_spectrum};
        for (std::size_t k = 0; k < bulk_sums.size(); ++k) {
          const double angle = static_cast<double>(k) * planted * t;
          ov.values[k] = (bulk_sums[k] + Complex{std::cos(angle), -std::sin(angle)}) * scale;
        }
        ov.values[0] = 1.0;
        const GMatrix g(n_states, ov, n_star);
        out[d] = evolve(g, n_star).back();
      }
    } else {
      const std::size_t target = 0;
      for (std::size_t d = 0; d < deltas; ++d) {
        const double gap = config.delta_grid[d] * kPi / (t * n_star);
        const auto levels = planted_gap_spectrum(config.n_qubits, e_ext, gap, false, seed);
        out[d] = success_curve(levels, t, n_star, std::span(&target, 1)).back();
      }
    }
  });

  std::vector<GapStudyRow> rows;
  rows.reserve(deltas);
  const double count = config.realizations;
  for (std::size_t d = 0; d < deltas; ++d) {
    double sum = 0.0;
    for (int r = 0; r < config.realizations; ++r) sum += success[static_cast<std::size_t>(r) * deltas + d];
    const double mean = sum / count;
    double ss = 0.0;
    for (int r = 0; r < config.realizations; ++r) {
      const double x = success[static_cast<std::size_t>(r) * deltas + d] - mean;
      ss += x * x;
    }
    const double stderr_ = config.realizations > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
    rows.push_back({config.n_qubits, config.delta_grid[d], mean, stderr_});
  }
  return rows;
}

std::vector<double> symmetric_extreme_spectrum(int n_qubits, double e_ext, std::uint64_t seed) {
  if (n_qubits < 2 || n_qubits > 30) {
    throw std::invalid_argument("symmetric_extreme_spectrum: n_qubits must be in [2, 30]");
  }
  const std::size_t size = std::size_t{1} << n_qubits;
  std::vector<double> levels{-e_ext, e_ext};
  const auto bulk = bulk_levels(size - 2, seed);
  levels.insert(levels.end(), bulk.begin(), bulk.end());
  return levels;
}

std::vector<SuccessStudyRow> success_study(const SuccessStudyConfig& config, int threads) {
  if (config.n_qubits < 2 || config.n_qubits > 30) {
    throw std::invalid_argument("success_study: n_qubits must be in [2, 30]");
  }
  if (config.realizations < 1) throw std::invalid_argument("success_study: need >= 1 realization");
  if (!(config.sigma_t > 0.0)) throw std::invalid_argument("success_study: sigma_t must be > 0");
  if (config.n_max < 0) throw std::invalid_argument("success_study: n_max must be >= 0");

  const double n_states = std::ldexp(1.0, config.n_qubits);
  const std::size_t size = std::size_t{1} << config.n_qubits;
  const double t = config.sigma_t;
  const int n_max = config.n_max > 0 ? config.n_max : 2 * optimal_iterations(n_states, true);
  const auto steps = static_cast<std::size_t>(n_max) + 1;

  std::vector<std::vector<double>> curves;
  if (config.source == OverlapSource::gaussian_analytic) {
    curves.push_back(evolve(GMatrix(n_states, gaussian_overlaps(1.0, t, n_max + 1), n_max), n_max));
  } else {
    curves.resize(static_cast<std::size_t>(config.realizations));
    parallel_for(curves.size(), threads, [&](std::size_t r) {
      const auto bulk =
          bulk_levels(size - 2, derive_seed(config.seed, SeedStream::synthetic_spectrum, r));
      OverlapSequence ov{phase_power_sums(bulk, t, n_max + 1), OverlapSource::empirical_spectrum};
      for (auto& v : ov.values) v /= static_cast<double>(size - 2);
      ov.values[0] = 1.0;
      curves[r] = evolve(GMatrix(n_states, ov, n_max), n_max);
    });
  }

  std::vector<SuccessStudyRow> rows;
  rows.reserve(steps);
  const double count = static_cast<double>(curves.size());
  for (std::size_t n = 0; n < steps; ++n) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[n];
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c[n] - mean) * (c[n] - mean);
    const double stderr_ = curves.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
    rows.push_back({config.n_qubits, config.sigma_t, static_cast<int>(n), mean, stderr_});
  }
  return rows;
}

}  // namespace grover_ising
