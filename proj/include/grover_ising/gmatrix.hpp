#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace grover_ising {

// Reduced dynamics of Grover iterations on a spectrum whose two extreme levels
// sit at +/-E with E T = pi. The state is tracked in the (non-orthogonal) basis
//   |+-> = (|+E> + |-E>)/sqrt 2,   |k> = U^k |0>,
// where |0> is the uniform superposition of the remaining N_s - 2 levels.
// One iteration maps (a, b_0, b_1, ...) linearly through G, whose only
// spectrum-dependent inputs are the overlaps <0|k>.

enum class OverlapSource { gaussian_analytic, empirical_spectrum };

struct OverlapSequence {
  std::vector<std::complex<double>> values;  // values[k] = <0|k>, values[0] = 1
  OverlapSource source = OverlapSource::gaussian_analytic;

  int horizon() const { return static_cast<int>(values.size()) - 1; }
};

/// <0|k> = exp(-k^2 t^2 sigma^2 / 2), k = 0..n_max.
OverlapSequence gaussian_overlaps(double sigma, double t, int n_max);

/// <0|k> = (1/(L-2)) sum_{j not in excluded} exp(-i k E_j t), k = 0..n_max.
OverlapSequence empirical_overlaps(std::span<const double> energies, double t, int n_max,
                                   std::pair<std::size_t, std::size_t> excluded);

/// Unnormalized sums S_k = sum_j exp(-i k E_j t) over all given levels, k = 0..n_max.
std::vector<std::complex<double>> phase_power_sums(std::span<const double> energies, double t,
                                                   int n_max);

/// G of dimension n_max + 2 acting on (a_pm, b_0, ..., b_n_max):
///   row 0:  1 - 2a0^2,  2 a0 b0 <0|1>, 2 a0 b0 <0|2>, ...
///   row 1:  -2 a0 b0,   2 b0^2 <0|1>,  2 b0^2 <0|2>,  ...
///   row r >= 2: -1 at column r - 1
/// with a0 = sqrt(2/N_s), b0 = sqrt(1 - a0^2). Stored as its two dense rows.
class GMatrix {
 public:
  GMatrix(double n_states, const OverlapSequence& overlaps, int n_max);

  int dimension() const { return n_max_ + 2; }
  int n_max() const { return n_max_; }
  double a0() const { return a0_; }
  double b0() const { return b0_; }
  std::complex<double> entry(int row, int col) const;

  /// out = G * in, using only the first `active` components of `in`
  /// (the rest are known to be zero). `out` gets active + 1 components.
  void apply(std::span<const std::complex<double>> in, std::size_t active,
             std::span<std::complex<double>> out) const;

 private:
  int n_max_ = 0;
  double a0_ = 0.0;
  double b0_ = 0.0;
  std::vector<std::complex<double>> row0_;
  std::vector<std::complex<double>> row1_;
};

GMatrix build_gmatrix(double n_states, const OverlapSequence& overlaps, int n_max);

struct ReducedState {
  std::complex<double> a_pm;
  std::vector<std::complex<double>> b;  // b_0..b_step
  int step = 0;
};

ReducedState initial_reduced_state(const GMatrix& g);
ReducedState evolve_state(const GMatrix& g, int steps);

/// P_pm(n) = |a_pm(n)|^2 for n = 0..steps. O(steps) memory, O(steps^2) work.
std::vector<double> evolve(const GMatrix& g, int steps);

/// |a|^2 + b^dagger Omega b with Omega_kl = <k|l> from the overlaps.
/// Equals 1 when the overlaps are the exact ones of the simulated spectrum.
double gram_norm(const ReducedState& state, const OverlapSequence& overlaps);

// Gap study: success probability at n* as a function of the distance of one
// planted level above the lowest extreme.

struct GapStudyConfig {
  int n_qubits = 10;
  std::vector<double> delta_grid;
  int realizations = 400;
  std::uint64_t seed = 0;
  /// Disorder level sigma*T of the bulk. The bulk is Normal(0, 1) and
  /// T = sigma_t, so the extreme pair sits at +/- pi / sigma_t.
  double sigma_t = 0.1 * 3.14159265358979323846;
  /// Keep the mirror level at +|E_min|. Without it the extreme is a single
  /// level and the full simulator is used.
  bool keep_mirror = true;
};

struct GapStudyRow {
  int n_qubits = 0;
  double delta = 0.0;
  double p_success_mean = 0.0;
  double p_success_stderr = 0.0;
};

/// Planted-gap spectrum for one realization: level 0 = -E_ext, level 1 = +E_ext
/// (or a bulk level when the mirror is dropped), level 2 = -E_ext + gap, rest bulk.
std::vector<double> planted_gap_spectrum(int n_qubits, double e_ext, double gap,
                                         bool keep_mirror, std::uint64_t seed);

std::vector<GapStudyRow> gap_study(const GapStudyConfig& config, int threads = 1);

/// Levels -E_ext, +E_ext followed by 2^n - 2 Normal(0, 1) bulk levels.
std::vector<double> symmetric_extreme_spectrum(int n_qubits, double e_ext, std::uint64_t seed);

// Success-probability curves P_pm(n) of the symmetric spectrum above, with
// T = sigma_t and E_ext = pi / T, averaged over bulk realizations.
struct SuccessStudyConfig {
  int n_qubits = 10;
  double sigma_t = 0.1 * 3.14159265358979323846;
  int realizations = 400;
  /// Last step of the curve; 0 means 2 n* with the degenerate-pair n*.
  int n_max = 0;
  std::uint64_t seed = 0;
  /// gaussian_analytic skips sampling and returns the single analytic curve.
  OverlapSource source = OverlapSource::empirical_spectrum;
};

struct SuccessStudyRow {
  int n_qubits = 0;
  double sigma_t = 0.0;
  int n = 0;
  double p_success_mean = 0.0;
  double p_success_stderr = 0.0;
};

std::vector<SuccessStudyRow> success_study(const SuccessStudyConfig& config, int threads = 1);

}  // namespace grover_ising
