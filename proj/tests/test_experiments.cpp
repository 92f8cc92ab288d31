#include <doctest.h>

#include <cmath>
#include <numeric>

#include "grover_ising/experiments.hpp"
#include "test_support.hpp"

using namespace grover_ising;

TEST_CASE("config validation lists every problem") {
  ExperimentConfig c;
  c.realizations = 0;
  c.bins = 1;
  c.sigma_j = -1.0;
  try {
    c.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("realizations") != std::string::npos);
    CHECK(msg.find("bins") != std::string::npos);
    CHECK(msg.find("sigma_j") != std::string::npos);
  }
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  CHECK(parse_schedule_policy("grid") == SchedulePolicy::grid);
  CHECK_THROWS_AS(parse_schedule_policy("monte-carlo"), std::invalid_argument);
}

TEST_CASE("brute force extremes") {
  const IsingInstance two({0.5, -0.25}, {0.3});
  const auto b = brute_force_extremes(two);
  CHECK(b.argmin_bits == "01");
  CHECK(b.argmax_bits == "00");
  CHECK(b.e_min == doctest::Approx(-1.35));

  const IsingInstance zero(std::vector<double>(4, 0.0), std::vector<double>(6, 0.0));
  const auto z = brute_force_extremes(zero);
  CHECK(z.argmin_bits == "0000");
  CHECK(z.argmax_bits == "0000");

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = sample_instance(10, 1.0, 1.0, seed);
    const auto s = enumerate_spectrum(inst);
    const auto r = brute_force_extremes(inst);
    CHECK(r.argmin == s.argmin());
    CHECK(r.argmax == s.argmax());
    CHECK(r.e_min == doctest::Approx(s.e_min()).epsilon(1e-12));
    CHECK(r.e_max == doctest::Approx(s.e_max()).epsilon(1e-12));
  }
}

TEST_CASE("histogram") {
  Histogram h(0.0, 1.0, 4);
  h.add(0.1, 1.0);
  h.add(0.3, 2.0);
  h.add(1.0, 0.5);
  h.add(-3.0, 0.25);
  CHECK(h.mass == std::vector<double>{1.25, 2.0, 0.0, 0.5});
  const auto d = h.density();
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) * h.width() == doctest::Approx(1.0));
  const auto r = h.rebin(2);
  CHECK(r.bins() == 2);
  CHECK(r.total() == doctest::Approx(h.total()).epsilon(1e-12));
  CHECK_THROWS_AS(h.rebin(3), std::invalid_argument);
  CHECK_THROWS_AS(Histogram(1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("median absolute deviation") {
  const std::vector<double> v{1, 2, 3, 4, 100};
  CHECK(median_absolute_deviation(v) == 1.0);
  const std::vector<double> even{1, 2, 3, 4};
  CHECK(median_absolute_deviation(even) == 1.0);
}

TEST_CASE("ensemble sigma matches the exact spectral variance on average") {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const double sd = enumerate_spectrum(sample_instance(8, 0.7, 1.2, s)).stddev();
    sum += sd * sd;
  }
  const double expected = ensemble_sigma(8, 0.7, 1.2);
  CHECK(sum / 200 == doctest::Approx(expected * expected).epsilon(0.05));
}

TEST_CASE("zero iterations leave the uniform distribution") {
  ExperimentConfig c;
  c.n_qubits = 6;
  c.realizations = 1;
  c.n = 0;
  c.keep_probabilities = true;
  const auto r = run_ensemble(c);
  for (double p : r.records[0].probabilities) CHECK(p == doctest::Approx(1.0 / 64));
  CHECK(r.records[0].n == 0);
}

TEST_CASE("ensemble invariants") {
  ExperimentConfig c;
  c.n_qubits = 8;
  c.realizations = 12;
  c.keep_probabilities = true;
  c.bins = 30;
  c.seed = 3;
  const auto r = run_ensemble(c);
  REQUIRE(r.records.size() == 12);
  for (const auto& rec : r.records) {
    CHECK(std::accumulate(rec.probabilities.begin(), rec.probabilities.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rec.n == 13);
  }
  CHECK(r.weighted_energy.total() == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(r.weighted_xi.total() == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(r.initial_energy.total() == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(r.weighted_energy.rebin(5).total() == doctest::Approx(r.weighted_energy.total()).epsilon(1e-12));
  const auto d = r.weighted_xi.density();
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) * r.weighted_xi.width() == doctest::Approx(1.0));
  CHECK(r.mean_tail_probability() > 10.0 / 256);

  // Adding realizations leaves earlier ones untouched.
  c.realizations = 20;
  c.threads = 3;
  const auto more = run_ensemble(c);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(more.records[i].instance_seed == r.records[i].instance_seed);
    CHECK(more.records[i].p_min == r.records[i].p_min);
  }
}

TEST_CASE("ensemble CSVs are reproducible byte for byte") {
  test_support::TempDir a("ens_a"), b("ens_b");
  ExperimentConfig c;
  c.n_qubits = 7;
  c.realizations = 8;
  c.policy = SchedulePolicy::grid;
  c.seed = 11;
  const auto pa = write_ensemble(run_ensemble(c), a.path);
  c.threads = 4;
  const auto pb = write_ensemble(run_ensemble(c), b.path);
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(test_support::slurp(pa[i]) == test_support::slurp(pb[i]));
  }
  CHECK(test_support::slurp(a.path / "realizations.csv")
            .rfind("index,instance_seed,sigma,T,n,e_min,e_max,p_min,p_max,most_probable,verified\n", 0) == 0);
}

TEST_CASE("feedback schedules verify at least as often as the fixed schedule") {
  ExperimentConfig c;
  c.n_qubits = 8;
  c.realizations = 40;
  c.seed = 9;
  const double fixed = run_ensemble(c).verified_fraction();
  c.policy = SchedulePolicy::feedback;
  const double feedback = run_ensemble(c).verified_fraction();
  CHECK(feedback >= fixed);
}
