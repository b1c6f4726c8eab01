#include <doctest.h>

#include <cmath>
#include <vector>

#include "gencoupon/errors.hpp"
#include "gencoupon/sim.hpp"
#include "oracles.hpp"

using namespace gencoupon;

TEST_CASE("summary statistics") {
  const TrialSummary s = summarize({4.0, 1.0, 3.0, 2.0});
  CHECK(s.mean == 2.5);
  CHECK(s.count == 4);
  CHECK(s.min == 1.0);
  CHECK(s.max == 4.0);
  CHECK(s.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(s.quantile(0.5) == 2.0);
  CHECK(s.quantile(0.51) == 3.0);
  CHECK(s.quantile(1.0) == 4.0);
  CHECK(summarize({7.0}).stderr_mean == 0.0);
  const auto j = summary_to_json(s);
  for (const char* key : {"mean", "stderr", "count", "min", "max", "quantiles"}) CHECK(j.contains(key));
  CHECK(j["quantiles"].size() == 7);
}

TEST_CASE("coupon draws") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(draw_T(1, 5, rng) == 5);
  for (int i = 0; i < 100; ++i) CHECK(draw_T(6, 1, rng) >= 6);
  const TrialSummary s = sample_T(1, 7, {50, 3, 1});
  CHECK(s.mean == 7.0);
  CHECK(s.stderr_mean == 0.0);
}

TEST_CASE("general event draw is coupled to the plain draw") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng a(seed), b(seed);
    CHECK(draw_T(5, 2, a) == draw_general_event(ThresholdSpec(5, {{5, 2}}), b));
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    CHECK(draw_general_event(ThresholdSpec(9, {{1, 1}}), rng) == 1);
  }
}

TEST_CASE("Markov oracle") {
  CHECK(markov_oracle(ThresholdSpec(2, {{2, 2}})) == doctest::Approx(5.5).epsilon(1e-13));
  CHECK(markov_oracle(ThresholdSpec(3, {{3, 1}})) == doctest::Approx(5.5).epsilon(1e-13));
  CHECK(markov_oracle(ThresholdSpec(1, {{1, 6}})) == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(markov_oracle(ThresholdSpec(5, {{5, 3}})) == doctest::Approx(oracle::expected_T_discrete(5, 3)).epsilon(1e-11));
  try {
    markov_oracle(ThresholdSpec(12, {{12, 3}}), 1000);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.cap() == 1000);
  }
}

TEST_CASE("simulation agrees with the exact means") {
  for (const auto& spec : {ThresholdSpec(4, {{2, 2}, {4, 1}}), ThresholdSpec(6, {{3, 2}}), ThresholdSpec(3, {{1, 3}, {3, 1}})}) {
    const TrialSummary s = sample_general_event(spec, {20'000, 99, 1});
    CHECK(std::abs(s.mean - markov_oracle(spec)) <= 4.0 * s.stderr_mean);
  }
  const TrialSummary s = sample_T(10, 2, {20'000, 5, 1});
  CHECK(std::abs(s.mean - expected_T(10, 2, 1e-9).value) <= 4.0 * s.stderr_mean);
}

TEST_CASE("results do not depend on the thread count") {
  const SamplePlan one{3000, 17, 1}, four{3000, 17, 4};
  CHECK(sample_T_values(7, 2, one) == sample_T_values(7, 2, four));
  const ThresholdSpec spec(5, {{2, 3}, {5, 1}});
  CHECK(sample_general_event_values(spec, one) == sample_general_event_values(spec, four));
  const GenerationConfig config(60, 6, 1, Field::gf256());
  const auto a = sample_codec_records(config, {400, 17, 1});
  const auto b = sample_codec_records(config, {400, 17, 4});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].total == b[i].total);
    CHECK(a[i].per_generation == b[i].per_generation);
  }
}

TEST_CASE("payload trials decode and match dof-only totals") {
  const GenerationConfig config(24, 4, 3, Field::prime(7));
  const auto dof = sample_codec_records(config, {200, 8, 1});
  const auto full = sample_codec_records_with_payload(config, {200, 8, 2});
  REQUIRE(dof.size() == full.size());
  for (std::size_t i = 0; i < dof.size(); ++i) {
    CHECK(full[i].decoded_ok);
    CHECK(full[i].total == dof[i].total);
  }
}

TEST_CASE("empirical failure curve") {
  const TrialSummary s = summarize({1.0, 2.0, 2.0, 3.0});
  const std::vector<double> grid{0.0, 1.0, 2.0, 2.5, 3.0};
  const auto curve = empirical_failure_curve(s, grid);
  REQUIRE(curve.size() == 5);
  CHECK(curve[0].fraction_above == 1.0);
  CHECK(curve[1].fraction_above == 0.75);
  CHECK(curve[2].fraction_above == 0.25);
  CHECK(curve[3].fraction_above == 0.25);
  CHECK(curve[4].fraction_above == 0.0);
  CHECK_THROWS_AS(empirical_failure_curve(TrialSummary{}, grid), DomainError);
}

TEST_CASE("codec failure curve sits above the leading-order bound") {
  const GenerationConfig config(200, 2, 1, Field::gf256());
  const TrialSummary s = sample_codec(config, {4000, 3, 1});
  std::vector<double> grid;
  for (double t = 100; t <= 3 * 100 * std::log(100.0); t += 10) grid.push_back(t);
  for (const auto& p : empirical_failure_curve(s, grid))
    CHECK(p.fraction_above >= failure_lower_bound(100, 2, p.t) - 0.10);
}
