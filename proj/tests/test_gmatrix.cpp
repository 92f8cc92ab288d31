#include <doctest.h>

#include <cmath>
#include <numbers>

#include "grover_ising/engine.hpp"
#include "grover_ising/gmatrix.hpp"
#include "grover_ising/seeding.hpp"
#include "grover_ising/spectral.hpp"
#include "test_support.hpp"

using namespace grover_ising;
using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

TEST_CASE("gaussian overlaps") {
  const auto ov = gaussian_overlaps(2.0, 0.3, 5);
  REQUIRE(ov.horizon() == 5);
  CHECK(ov.values[0] == C(1.0, 0.0));
  CHECK(ov.values[3].real() == doctest::Approx(std::exp(-0.5 * 9 * 0.36)));
  CHECK(ov.source == OverlapSource::gaussian_analytic);
}

TEST_CASE("phase power sums") {
  const auto levels = test_support::normal_levels(700, 1.0, 1);
  const auto sums = phase_power_sums(levels, 0.4, 6);
  for (int k = 0; k <= 6; ++k) {
    C direct{0.0, 0.0};
    for (double e : levels) direct += std::exp(C(0.0, -k * e * 0.4));
    CHECK(std::abs(sums[static_cast<std::size_t>(k)] - direct) < 1e-9);
  }
}

TEST_CASE("G matrix layout") {
  const auto ov = gaussian_overlaps(1.0, 0.5, 6);
  const GMatrix g(64.0, ov, 5);
  CHECK(g.dimension() == 7);
  const double a0 = std::sqrt(2.0 / 64), b0 = std::sqrt(1 - a0 * a0);
  CHECK(g.a0() == doctest::Approx(a0));
  CHECK(g.entry(0, 0).real() == doctest::Approx(1 - 2 * a0 * a0));
  CHECK(std::abs(g.entry(0, 2) - 2 * a0 * b0 * ov.values[2]) < 1e-15);
  CHECK(g.entry(1, 0).real() == doctest::Approx(-2 * a0 * b0));
  CHECK(std::abs(g.entry(1, 3) - 2 * b0 * b0 * ov.values[3]) < 1e-15);
  CHECK(g.entry(3, 2) == C(-1.0, 0.0));
  CHECK(g.entry(3, 3) == C(0.0, 0.0));
  CHECK(g.entry(4, 0) == C(0.0, 0.0));
  CHECK_THROWS_AS(GMatrix(64.0, ov, 6), std::invalid_argument);
  CHECK_THROWS_AS(evolve(g, 6), std::out_of_range);
}

TEST_CASE("flat bulk reduces the G model to ideal two-marked Grover") {
  OverlapSequence ov{std::vector<C>(32, C(1.0, 0.0)), OverlapSource::empirical_spectrum};
  const GMatrix g(1024.0, ov, 30);
  const auto curve = evolve(g, 30);
  const double a = std::asin(std::sqrt(2.0 / 1024));
  for (int n = 0; n <= 30; ++n) {
    CHECK(curve[static_cast<std::size_t>(n)] == doctest::Approx(std::pow(std::sin((2 * n + 1) * a), 2)).epsilon(1e-10));
  }
}

TEST_CASE("G model with exact overlaps equals the full simulation") {
  for (int nq : {4, 7, 10}) {
    for (double st : {0.05, 0.25}) {
      const double t = st * kPi;
      const auto levels = symmetric_extreme_spectrum(nq, kPi / t, 17 + nq);
      const int steps = 2 * optimal_iterations(std::ldexp(1.0, nq), true);
      const auto ov = empirical_overlaps(levels, t, steps + 1, {0, 1});
      const GMatrix g(std::ldexp(1.0, nq), ov, steps);
      const auto reduced = evolve(g, steps);
      const std::size_t targets[] = {0, 1};
      const auto full = success_curve(levels, t, steps, targets);
      for (int n = 0; n <= steps; ++n) {
        CHECK(std::abs(reduced[static_cast<std::size_t>(n)] - full[static_cast<std::size_t>(n)]) < 1e-10);
      }
      CHECK(gram_norm(evolve_state(g, steps), ov) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("empirical overlaps validation") {
  const std::vector<double> levels{1.0, -1.0, 0.5, 0.2};
  CHECK_THROWS_AS(empirical_overlaps(levels, 1.0, 3, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(empirical_overlaps(levels, 1.0, 3, {0, 9}), std::invalid_argument);
  const auto ov = empirical_overlaps(levels, 1.0, 2, {0, 1});
  CHECK(ov.values[0] == C(1.0, 0.0));
  CHECK(std::abs(ov.values[1] - 0.5 * (std::exp(C(0, -0.5)) + std::exp(C(0, -0.2)))) < 1e-15);
}

TEST_CASE("planted gap spectrum layout") {
  const auto with = planted_gap_spectrum(5, 4.0, 0.5, true, 3);
  REQUIRE(with.size() == 32);
  CHECK(with[0] == -4.0);
  CHECK(with[1] == 4.0);
  CHECK(with[2] == -3.5);
  const auto without = planted_gap_spectrum(5, 4.0, 0.5, false, 3);
  CHECK(without[0] == -4.0);
  CHECK(without[2] == -3.5);
  CHECK(std::abs(without[1]) < 4.0);
}

TEST_CASE("gap study") {
  GapStudyConfig config;
  config.n_qubits = 8;
  config.delta_grid = {0.0, 1.0, 4.0, 8.0};
  config.realizations = 20;
  config.seed = 5;
  const auto rows = gap_study(config);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.p_success_mean >= 0.0);
    CHECK(r.p_success_mean <= 1.0);
    CHECK(r.n_qubits == 8);
  }
  // A level on top of the marked one steals amplitude; far away it does not.
  CHECK(rows[0].p_success_mean < rows[3].p_success_mean);
  const auto again = gap_study(config, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].p_success_mean == rows[i].p_success_mean);

  config.keep_mirror = false;
  CHECK(gap_study(config).size() == 4);
  config.delta_grid.clear();
  CHECK_THROWS_AS(gap_study(config), std::invalid_argument);
}

TEST_CASE("success study") {
  SuccessStudyConfig config;
  config.n_qubits = 8;
  config.sigma_t = 0.1 * kPi;
  config.realizations = 10;
  const auto rows = success_study(config, 2);
  const int n_star = optimal_iterations(256.0, true);
  REQUIRE(rows.size() == static_cast<std::size_t>(2 * n_star + 1));
  CHECK(rows[0].p_success_mean == doctest::Approx(2.0 / 256));

  // Realization 0 of the study is symmetric_extreme_spectrum with the derived seed.
  config.realizations = 1;
  const auto single = success_study(config);
  const auto levels = symmetric_extreme_spectrum(8, kPi / config.sigma_t,
                                                 derive_seed(0, SeedStream::synthetic_spectrum, 0));
  const std::size_t targets[] = {0, 1};
  const auto full = success_curve(levels, config.sigma_t, 2 * n_star, targets);
  for (std::size_t n = 0; n < full.size(); ++n) CHECK(std::abs(single[n].p_success_mean - full[n]) < 1e-10);

  config.source = OverlapSource::gaussian_analytic;
  CHECK(success_study(config).size() == rows.size());
}
