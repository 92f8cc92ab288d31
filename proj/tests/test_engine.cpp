#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "grover_ising/engine.hpp"
#include "grover_ising/ising.hpp"
#include "test_support.hpp"

using namespace grover_ising;
using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

double max_deviation(std::span<const C> a, const std::vector<C>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("engine follows the literal amplitude recurrence") {
  for (int nq = 2; nq <= 9; ++nq) {
    const auto inst = sample_instance(nq, 1.0, 0.5, 100 + nq);
    const Spectrum s = enumerate_spectrum(inst);
    const std::vector<double> levels(s.energies().begin(), s.energies().end());
    const double t = 0.8 / s.stddev();
    const auto history = test_support::literal_recurrence(levels, t, 12);
    for (int n = 1; n <= 12; n += 5) {
      const auto result = run(levels, GroverSchedule(t, n));
      CHECK(max_deviation(result.final_state.amplitudes(), history[static_cast<std::size_t>(n)]) < 1e-12);
    }
  }
}

TEST_CASE("engine matches a dense operator product") {
  const auto levels = test_support::normal_levels(64, 1.0, 8);
  const double t = 1.1;
  const std::size_t size = levels.size();
  // Dense (2|s><s| - I) diag(exp(-i E t)).
  std::vector<C> op(size * size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double d = (r == c ? 1.0 : 0.0);
      op[r * size + c] = (2.0 / static_cast<double>(size) - d) * std::exp(C(0.0, -levels[c] * t));
    }
  }
  std::vector<C> v(size, 1.0 / std::sqrt(static_cast<double>(size)));
  for (int n = 1; n <= 7; ++n) {
    std::vector<C> next(size, 0.0);
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) next[r] += op[r * size + c] * v[c];
    }
    v = next;
  }
  const auto result = run(levels, GroverSchedule(t, 7));
  CHECK(max_deviation(result.final_state.amplitudes(), v) < 1e-12);
}

TEST_CASE("one iteration equals the closed form") {
  const auto levels = test_support::normal_levels(256, 2.0, 3);
  const double t = 0.7;
  const double n = 256.0;
  C sum{0.0, 0.0};
  for (double e : levels) sum += std::exp(C(0.0, -e * t));
  const auto result = run(levels, GroverSchedule(t, 1));
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const C g = 2.0 / (n * std::sqrt(n)) * sum - std::exp(C(0.0, -levels[j] * t)) / std::sqrt(n);
    CHECK(std::abs(result.final_state.amplitudes()[j] - g) < 1e-14);
  }
}

TEST_CASE("two phase-flipped levels reproduce ideal Grover") {
  for (int nq : {3, 6, 10}) {
    const std::size_t size = std::size_t{1} << nq;
    const double e = 2.0;
    std::vector<double> levels(size, 0.0);
    levels[0] = -e;
    levels[size - 1] = e;
    const double a = std::asin(std::sqrt(2.0 / static_cast<double>(size)));
    const std::size_t targets[] = {0, size - 1};
    const auto curve = success_curve(levels, kPi / e, 40, targets);
    for (int n = 0; n <= 40; ++n) {
      CHECK(curve[static_cast<std::size_t>(n)] == doctest::Approx(std::pow(std::sin((2 * n + 1) * a), 2)).epsilon(1e-10));
    }
  }
}

TEST_CASE("norm, phases and involution") {
  const auto levels = test_support::normal_levels(128, 1.0, 2);
  auto state = uniform_state(levels);
  CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
  const auto after_oracle = apply_oracle(state, 0.9);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    CHECK(std::abs(after_oracle.amplitudes()[j]) == doctest::Approx(std::abs(state.amplitudes()[j])));
  }
  const auto once = apply_diffusion(after_oracle);
  const auto twice = apply_diffusion(once);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    CHECK(std::abs(twice.amplitudes()[j] - after_oracle.amplitudes()[j]) < 1e-14);
  }
  const auto long_run = run(levels, GroverSchedule(0.9, 500));
  CHECK(long_run.final_state.norm_squared() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(apply_oracle(state, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(AmplitudeState({C(1.0)}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AmplitudeState({C(1.0), C(0.0)}, {0.0}), std::invalid_argument);
}

TEST_CASE("reversing the sign of every energy conjugates the amplitudes") {
  auto levels = test_support::normal_levels(64, 1.0, 11);
  const auto a = run(levels, GroverSchedule(0.6, 5));
  for (auto& e : levels) e = -e;
  const auto b = run(levels, GroverSchedule(0.6, 5));
  for (std::size_t j = 0; j < levels.size(); ++j) {
    CHECK(std::abs(a.final_state.amplitudes()[j] - std::conj(b.final_state.amplitudes()[j])) < 1e-14);
  }
}

TEST_CASE("pairwise sum") {
  std::vector<C> values;
  C naive{0.0, 0.0};
  for (int i = 0; i < 3000; ++i) {
    values.emplace_back(std::sin(i), std::cos(0.5 * i));
    naive += values.back();
  }
  const C p = pairwise_sum(values);
  CHECK(std::abs(p - naive) < 1e-10);
  CHECK(pairwise_sum({}) == C(0.0, 0.0));
}

TEST_CASE("trace modes") {
  const auto levels = test_support::normal_levels(32, 1.0, 4);
  const auto none = run(levels, GroverSchedule(0.5, 4));
  CHECK(none.trace.rows.empty());
  const auto full = run(levels, GroverSchedule(0.5, 4), TraceMode::full);
  REQUIRE(full.trace.rows.size() == 5);
  CHECK(full.trace.rows[0].step == 0);
  CHECK(full.trace.rows[0].p_success == doctest::Approx(2.0 / 32));
  for (const auto& row : full.trace.rows) {
    CHECK(std::accumulate(row.p_levels.begin(), row.p_levels.end(), 0.0) == doctest::Approx(1.0));
  }
  const auto probs = probabilities(full.final_state);
  const Spectrum s(levels);
  CHECK(full.trace.rows.back().p_min_state == doctest::Approx(probs[s.argmin()]));
  CHECK(full.trace.rows.back().p_max_state == doctest::Approx(probs[s.argmax()]));

  test_support::TempDir dir("engine_trace");
  write_trace_csv(run(levels, GroverSchedule(0.5, 2), TraceMode::summary).trace, dir.path / "t.csv");
  CHECK(test_support::slurp(dir.path / "t.csv").rfind("step,p_success,p_min_state,p_max_state\n0,", 0) == 0);
  write_snapshot_csv(full.final_state, dir.path / "s.csv");
  CHECK(test_support::slurp(dir.path / "s.csv").rfind("index,energy,probability\n0,", 0) == 0);
}

TEST_CASE("xi transform") {
  const std::vector<double> levels{3.0, -1.0, 1.0, 0.0};
  const auto xi = xi_transform(levels);
  CHECK(xi[0] == 1.0);
  CHECK(xi[1] == 0.0);
  CHECK(xi[2] == doctest::Approx(0.5));
  CHECK_THROWS(xi_transform(std::vector<double>{1.0, 1.0}));
}

TEST_CASE("measurement sampling") {
  const auto levels = test_support::normal_levels(16, 1.0, 6);
  const auto state = run(levels, GroverSchedule(1.0, 2)).final_state;
  const auto a = measure(state, 20000, 99);
  CHECK(a == measure(state, 20000, 99));
  std::size_t total = 0;
  for (const auto& [idx, count] : a) total += count;
  CHECK(total == 20000);
  const auto probs = probabilities(state);
  for (const auto& [idx, count] : a) {
    const double expected = 20000 * probs[idx];
    CHECK(std::abs(count - expected) < 6.0 * std::sqrt(expected) + 1.0);
  }
  std::vector<C> delta(4, 0.0);
  delta[2] = 1.0;
  const auto certain = measure(AmplitudeState(delta, {0, 0, 0, 0}), 100, 1);
  REQUIRE(certain.size() == 1);
  CHECK(certain.begin()->first == 2);
  CHECK(measure(state, 0, 1).empty());
}
