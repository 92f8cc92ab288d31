#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "grover_ising/ising.hpp"
#include "test_support.hpp"

using namespace grover_ising;

TEST_CASE("two-qubit energies by hand") {
  const IsingInstance inst({0.5, -0.25}, {0.3});
  // bit 0 -> s = +1; H = eps0 s0 + eps1 s1 + 2 J01 s0 s1
  CHECK(energy(inst, {0b00}) == doctest::Approx(0.85));
  CHECK(energy(inst, {0b01}) == doctest::Approx(-1.35));
  CHECK(energy(inst, {0b10}) == doctest::Approx(0.15));
  CHECK(energy(inst, {0b11}) == doctest::Approx(0.35));

  const Spectrum s = enumerate_spectrum(inst);
  CHECK(s.argmin() == 1);
  CHECK(s.argmax() == 0);
  CHECK(s.gap() == doctest::Approx(1.5));
  CHECK(to_bitstring({s.argmin()}, 2) == "01");
}

TEST_CASE("bitstrings read as the binary index") {
  CHECK(to_bitstring({1}, 3) == "001");
  CHECK(to_bitstring({6}, 3) == "110");
  CHECK(flip_all_spins({0b011}, 3).bits == 0b100);
  SpinConfiguration c{0b10};
  CHECK(c.spin(0) == 1);
  CHECK(c.spin(1) == -1);
}

TEST_CASE("pair indexing is row-major over i < j") {
  CHECK(IsingInstance::pair_count(4) == 6);
  CHECK(IsingInstance::pair_index(0, 1, 4) == 0);
  CHECK(IsingInstance::pair_index(0, 3, 4) == 2);
  CHECK(IsingInstance::pair_index(1, 2, 4) == 3);
  CHECK(IsingInstance::pair_index(2, 3, 4) == 5);
  const IsingInstance inst({0, 0, 0, 0}, {1, 2, 3, 4, 5, 6});
  CHECK(inst.coupling(1, 3) == 5);
  CHECK(inst.coupling(3, 1) == 5);
  CHECK_THROWS_AS(inst.coupling(2, 2), std::out_of_range);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(IsingInstance({1.0, 2.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(IsingInstance({1.0, std::numeric_limits<double>::quiet_NaN()}, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_instance(4, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_instance(0, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("sampling is a pure function of the seed") {
  const auto a = sample_instance(7, 1.0, 0.5, 42);
  const auto b = sample_instance(7, 1.0, 0.5, 42);
  const auto c = sample_instance(7, 1.0, 0.5, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.seed() == 42);
}

TEST_CASE("enumerated spectrum matches direct evaluation bit for bit") {
  const auto inst = sample_instance(9, 1.3, 0.7, 5);
  const Spectrum s = enumerate_spectrum(inst);
  REQUIRE(s.size() == 512);
  for (std::uint64_t b = 0; b < 512; ++b) CHECK(s.energies()[b] == energy(inst, {b}));
}

TEST_CASE("spectrum moments: zero mean, variance sum eps^2 + 4 sum J^2") {
  // Over all 2^n configurations the products s_j and s_i s_j average to zero
  // and are mutually orthogonal.
  const auto inst = sample_instance(10, 0.8, 1.1, 9);
  const Spectrum s = enumerate_spectrum(inst);
  double expected = 0.0;
  for (double e : inst.fields()) expected += e * e;
  for (double j : inst.couplings()) expected += kPairFactor * kPairFactor * j * j;
  CHECK(std::abs(s.mean()) < 1e-10);
  CHECK(s.stddev() == doctest::Approx(std::sqrt(expected)).epsilon(1e-10));
}

TEST_CASE("without fields the spectrum is symmetric under a global spin flip") {
  auto base = sample_instance(6, 1.0, 1.0, 3);
  const IsingInstance inst(std::vector<double>(6, 0.0),
                           std::vector<double>(base.couplings().begin(), base.couplings().end()));
  for (std::uint64_t b = 0; b < 64; ++b) {
    CHECK(energy(inst, {b}) == doctest::Approx(energy(inst, flip_all_spins({b}, 6))));
  }
}

TEST_CASE("spectrum bookkeeping") {
  const Spectrum s({0.0, 1.0, 3.0, -2.0});
  CHECK(s.e_min() == -2.0);
  CHECK(s.argmin() == 3);
  CHECK(s.e_max() == 3.0);
  CHECK(s.argmax() == 2);
  CHECK(s.gap() == 2.0);
  CHECK(s.n_qubits() == 2);
  CHECK(Spectrum({1.0, 1.0, 2.0, 3.0}).gap() == 0.0);
  CHECK(Spectrum({1.0, 1.0, 2.0, 3.0}).argmin() == 0);
  CHECK_THROWS_AS(Spectrum({1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({1.0}), std::invalid_argument);
}

TEST_CASE("enumeration refuses sizes above the limit") {
  const auto inst = sample_instance(9, 1.0, 1.0, 1);
  CHECK_THROWS_AS(enumerate_spectrum(inst, 8), std::length_error);
}

TEST_CASE("instance files round-trip") {
  test_support::TempDir dir("ising_io");
  const auto inst = sample_instance(6, 1.0, 2.0, 77);
  save_instance(inst, dir.path / "a.json");
  CHECK(load_instance(dir.path / "a.json") == inst);

  std::ofstream(dir.path / "bad.json") << "{\"format\": \"something-else\"}";
  CHECK_THROWS(load_instance(dir.path / "bad.json"));
  CHECK_THROWS(load_instance(dir.path / "missing.json"));

  write_spectrum_csv(enumerate_spectrum(inst), dir.path / "s.csv");
  const auto text = test_support::slurp(dir.path / "s.csv");
  CHECK(text.rfind("bitstring,energy\n000000,", 0) == 0);
}
