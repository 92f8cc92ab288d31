#include "grover_ising/ising.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace grover_ising {

SpinConfiguration flip_all_spins(SpinConfiguration config, int n_qubits) {
  const std::uint64_t mask =
      n_qubits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_qubits) - 1);
  return SpinConfiguration{config.bits ^ mask};
}

std::string to_bitstring(SpinConfiguration config, int n_qubits) {
  std::string out(static_cast<std::size_t>(n_qubits), '0');
  for (int j = 0; j < n_qubits; ++j) {
    if ((config.bits >> j) & 1u) out[static_cast<std::size_t>(n_qubits - 1 - j)] = '1';
  }
  return out;
}

IsingInstance::IsingInstance(std::vector<double> fields, std::vector<double> couplings,
                             std::uint64_t seed)
    : fields_(std::move(fields)), couplings_(std::move(couplings)), seed_(seed) {
  if (fields_.empty()) throw std::invalid_argument("IsingInstance: n_qubits must be >= 1");
  if (fields_.size() > 63) throw std::invalid_argument("IsingInstance: at most 63 qubits");
  if (couplings_.size() != pair_count(n_qubits())) {
    throw std::invalid_argument("IsingInstance: expected " +
                                std::to_string(pair_count(n_qubits())) + " couplings, got " +
                                std::to_string(couplings_.size()));
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(fields_.begin(), fields_.end(), finite) ||
      !std::all_of(couplings_.begin(), couplings_.end(), finite)) {
    throw std::invalid_argument("IsingInstance: non-finite field or coupling");
  }
}

std::size_t IsingInstance::pair_count(int n_qubits) {
  const auto n = static_cast<std::size_t>(n_qubits);
  return n * (n - 1) / 2;
}

std::size_t IsingInstance::pair_index(int i, int j, int n_qubits) {
  if (i > j) std::swap(i, j);
  const auto ii = static_cast<std::size_t>(i);
  const auto n = static_cast<std::size_t>(n_qubits);
  // Pairs before row i: sum_{r<i} (n-1-r).
  return ii * (2 * n - ii - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double IsingInstance::coupling(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_qubits() || j >= n_qubits()) {
    throw std::out_of_range("IsingInstance::coupling: bad pair");
  }
  return couplings_[pair_index(i, j, n_qubits())];
}

IsingInstance sample_instance(int n_qubits, double sigma_eps, double sigma_j,
                              std::uint64_t seed) {
  if (n_qubits < 1) throw std::invalid_argument("sample_instance: n_qubits must be >= 1");
  if (!(sigma_eps > 0.0) || !(sigma_j > 0.0)) {
    throw std::invalid_argument("sample_instance: deviations must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> eps_dist(0.0, sigma_eps);
  std::normal_distribution<double> j_dist(0.0, sigma_j);
  std::vector<double> fields(static_cast<std::size_t>(n_qubits));
  for (auto& f : fields) f = eps_dist(rng);
  std::vector<double> couplings(IsingInstance::pair_count(n_qubits));
  for (auto& c : couplings) c = j_dist(rng);
  return IsingInstance(std::move(fields), std::move(couplings), seed);
}

double energy(const IsingInstance& instance, SpinConfiguration config) {
  const int n = instance.n_qubits();
  if (n < 64 && (config.bits >> n) != 0) {
    throw std::out_of_range("energy: configuration has bits beyond n_qubits");
  }
  const auto fields = instance.fields();
  const auto couplings = instance.couplings();
  double e = 0.0;
  for (int j = 0; j < n; ++j) e += fields[static_cast<std::size_t>(j)] * config.spin(j);
  std::size_t p = 0;
  for (int i = 0; i < n; ++i) {
    const int si = config.spin(i);
    for (int j = i + 1; j < n; ++j) {
      e += kPairFactor * couplings[p++] * (si * config.spin(j));
    }
  }
  return e;
}

Spectrum::Spectrum(std::vector<double> energies) : energies_(std::move(energies)) {
  const std::size_t size = energies_.size();
  if (size < 2 || (size & (size - 1)) != 0) {
    throw std::invalid_argument("Spectrum: length must be 2^n with n >= 1");
  }
  while ((std::size_t{1} << n_qubits_) < size) ++n_qubits_;

  double lowest = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < size; ++b) {
    const double e = energies_[b];
    if (e < lowest) {
      second = lowest;
      lowest = e;
      argmin_ = b;
    } else if (e < second) {
      second = e;
    }
    if (e > energies_[argmax_]) argmax_ = b;
  }
  e_min_ = lowest;
  e_max_ = energies_[argmax_];
  gap_ = second - lowest;
}

double Spectrum::mean() const {
  double s = 0.0;
  for (double e : energies_) s += e;
  return s / static_cast<double>(energies_.size());
}

double Spectrum::stddev() const {
  const double m = mean();
  double s = 0.0;
  for (double e : energies_) s += (e - m) * (e - m);
  return std::sqrt(s / static_cast<double>(energies_.size()));
}

Spectrum enumerate_spectrum(const IsingInstance& instance, int max_qubits) {
  const int n = instance.n_qubits();
  if (n >= max_qubits) {
    throw std::length_error("enumerate_spectrum: " + std::to_string(n) +
                            " qubits exceeds the enumeration guard (" +
                            std::to_string(max_qubits) + ")");
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> energies(size, 0.0);
  const auto fields = instance.fields();
  const auto couplings = instance.couplings();

  // Blocked over basis states so the inner loops vectorize. Every level
  // accumulates its terms in the same order as energy(), and the spin
  // products are exact, so results match it bit for bit.
  constexpr std::size_t kBlock = 512;
  std::vector<double> spins(static_cast<std::size_t>(n) * kBlock);
  for (std::size_t base = 0; base < size; base += kBlock) {
    const std::size_t len = std::min(kBlock, size - base);
    double* out = energies.data() + base;
    for (int j = 0; j < n; ++j) {
      double* sj = spins.data() + static_cast<std::size_t>(j) * kBlock;
      for (std::size_t b = 0; b < len; ++b) {
        sj[b] = 1.0 - 2.0 * static_cast<double>(((base + b) >> j) & 1u);
      }
      const double f = fields[static_cast<std::size_t>(j)];
      for (std::size_t b = 0; b < len; ++b) out[b] += f * sj[b];
    }
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
      const double* si = spins.data() + static_cast<std::size_t>(i) * kBlock;
      for (int j = i + 1; j < n; ++j) {
        const double* sj = spins.data() + static_cast<std::size_t>(j) * kBlock;
        const double term = kPairFactor * couplings[p++];
        for (std::size_t b = 0; b < len; ++b) out[b] += term * (si[b] * sj[b]);
      }
    }
  }
  return Spectrum(std::move(energies));
}

void save_instance(const IsingInstance& instance, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = "grover-ising-instance";
  doc["version"] = 1;
  doc["n_qubits"] = instance.n_qubits();
  doc["seed"] = instance.seed();
  doc["fields"] = std::vector<double>(instance.fields().begin(), instance.fields().end());
  doc["couplings"] =
      std::vector<double>(instance.couplings().begin(), instance.couplings().end());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("save_instance: write failed for " + path.string());
}

IsingInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_instance: " + path.string() + ": " + e.what());
  }
  if (doc.value("format", std::string{}) != "grover-ising-instance") {
    throw std::runtime_error("load_instance: " + path.string() + " is not an instance file");
  }
  const int n = doc.at("n_qubits").get<int>();
  auto fields = doc.at("fields").get<std::vector<double>>();
  auto couplings = doc.at("couplings").get<std::vector<double>>();
  if (static_cast<int>(fields.size()) != n) {
    throw std::runtime_error("load_instance: fields length does not match n_qubits");
  }
  return IsingInstance(std::move(fields), std::move(couplings),
                       doc.value("seed", std::uint64_t{0}));
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_spectrum_csv: cannot open " + path.string());
  out << "bitstring,energy\n" << std::setprecision(17);
  const auto energies = spectrum.energies();
  for (std::size_t b = 0; b < energies.size(); ++b) {
    out << to_bitstring(SpinConfiguration{b}, spectrum.n_qubits()) << ',' << energies[b]
        << '\n';
  }
}

}  // namespace grover_ising
