#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gencoupon/codec.hpp"
#include "gencoupon/random.hpp"
#include "gencoupon/theory.hpp"

namespace gencoupon {

/// How many trials to run and how to seed them. Trial i always uses
/// trial_seed(master_seed, i), so results do not depend on `threads`.
struct SamplePlan {
  std::size_t trials = 10'000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
};

/// Summary statistics over the raw samples of one run.
struct TrialSummary {
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(count)
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> sorted;  // empirical CDF

  /// Nearest-rank quantile, p in (0, 1].
  double quantile(double p) const;
};

TrialSummary summarize(std::vector<double> samples);

/// Stopping time of uniform coupon draws until all n counts reach m.
std::uint64_t draw_T(std::uint32_t n, std::uint32_t m, Rng& rng);
/// Stopping time of uniform coupon draws until the event of `spec` holds.
std::uint64_t draw_general_event(const ThresholdSpec& spec, Rng& rng);

/// Raw per-trial values in trial order.
std::vector<double> sample_T_values(std::uint32_t n, std::uint32_t m, const SamplePlan& plan);
std::vector<double> sample_general_event_values(const ThresholdSpec& spec, const SamplePlan& plan);

TrialSummary sample_T(std::uint32_t n, std::uint32_t m, const SamplePlan& plan);
TrialSummary sample_general_event(const ThresholdSpec& spec, const SamplePlan& plan);

/// Full codec trials in dof-only mode, one record per trial with its seed.
std::vector<TrialRecord> sample_codec_records(const GenerationConfig& config, const SamplePlan& plan);
/// Codec trials carrying payloads and checking every decoded generation.
std::vector<TrialRecord> sample_codec_records_with_payload(const GenerationConfig& config,
                                                           const SamplePlan& plan);
TrialSummary sample_codec(const GenerationConfig& config, const SamplePlan& plan);
TrialSummary summarize_records(const std::vector<TrialRecord>& records);

inline constexpr std::uint64_t kDefaultStateCap = 1'000'000;

/// Exact expected stopping time of the absorbing chain on count vectors
/// capped at m_1. Throws ResourceError when (m_1 + 1)^n exceeds `state_cap`.
double markov_oracle(const ThresholdSpec& spec, std::uint64_t state_cap = kDefaultStateCap);

struct FailurePoint {
  double t;
  double fraction_above;  // fraction of samples with value > t
};

/// Pointwise empirical CCDF on `t_grid`. Throws DomainError for empty samples.
std::vector<FailurePoint> empirical_failure_curve(const TrialSummary& samples, std::span<const double> t_grid);

/// JSON object: mean, stderr, count, min, max, quantiles at 1/5/25/50/75/95/99 %.
nlohmann::ordered_json summary_to_json(const TrialSummary& summary);

}  // namespace gencoupon
