#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace grover_ising {

// Each unordered pair i<j is stored once and counted twice in the energy,
// which is the ordered-pair sum with J_ij = J_ji.
inline constexpr double kPairFactor = 2.0;

// 2^24 doubles = 128 MiB of energies.
inline constexpr int kDefaultMaxQubits = 24;

/// Computational basis label. Bit j = 0 means spin s_j = +1, bit j = 1 means s_j = -1.
struct SpinConfiguration {
  std::uint64_t bits = 0;

  int spin(int j) const { return ((bits >> j) & 1u) ? -1 : 1; }
  friend bool operator==(SpinConfiguration, SpinConfiguration) = default;
};

SpinConfiguration flip_all_spins(SpinConfiguration config, int n_qubits);

/// Bitstring with qubit n-1 first, so the string reads as the binary index.
std::string to_bitstring(SpinConfiguration config, int n_qubits);

/// One disorder realization of the all-to-all Ising Hamiltonian
///   H = sum_j eps_j s_j + kPairFactor * sum_{i<j} J_ij s_i s_j.
/// Couplings are stored row-major over i<j: (0,1), (0,2), ..., (1,2), ...
class IsingInstance {
 public:
  IsingInstance(std::vector<double> fields, std::vector<double> couplings,
                std::uint64_t seed = 0);

  int n_qubits() const { return static_cast<int>(fields_.size()); }
  std::span<const double> fields() const { return fields_; }
  std::span<const double> couplings() const { return couplings_; }
  double coupling(int i, int j) const;
  std::uint64_t seed() const { return seed_; }

  static std::size_t pair_count(int n_qubits);
  static std::size_t pair_index(int i, int j, int n_qubits);

  friend bool operator==(const IsingInstance&, const IsingInstance&) = default;

 private:
  std::vector<double> fields_;
  std::vector<double> couplings_;
  std::uint64_t seed_ = 0;
};

IsingInstance sample_instance(int n_qubits, double sigma_eps, double sigma_j,
                              std::uint64_t seed);

double energy(const IsingInstance& instance, SpinConfiguration config);

/// Energies of all 2^n basis states, indexed by SpinConfiguration::bits.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> energies);

  std::span<const double> energies() const { return energies_; }
  std::size_t size() const { return energies_.size(); }
  int n_qubits() const { return n_qubits_; }

  double e_min() const { return e_min_; }
  double e_max() const { return e_max_; }
  std::size_t argmin() const { return argmin_; }
  std::size_t argmax() const { return argmax_; }
  /// E_1 - E_0 for the two smallest energies (0 when the ground state is degenerate).
  double gap() const { return gap_; }

  double mean() const;
  /// Population standard deviation over all levels.
  double stddev() const;

 private:
  std::vector<double> energies_;
  int n_qubits_ = 0;
  double e_min_ = 0.0;
  double e_max_ = 0.0;
  std::size_t argmin_ = 0;
  std::size_t argmax_ = 0;
  double gap_ = 0.0;
};

Spectrum enumerate_spectrum(const IsingInstance& instance,
                            int max_qubits = kDefaultMaxQubits);

// Instance files are JSON documents:
//   {"format": "grover-ising-instance", "version": 1, "n_qubits": N,
//    "seed": S, "fields": [...N], "couplings": [...N(N-1)/2, row-major i<j]}
void save_instance(const IsingInstance& instance, const std::filesystem::path& path);
IsingInstance load_instance(const std::filesystem::path& path);

/// CSV `bitstring,energy`.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

}  // namespace grover_ising
