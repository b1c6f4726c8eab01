#include "gencoupon/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <Eigen/SparseCore>

#include "gencoupon/errors.hpp"

namespace gencoupon {

namespace {

// Runs body(i, rng_i) for every trial; output slot i is owned by trial i only.
template <typename Result, typename Body>
std::vector<Result> run_trials(const SamplePlan& plan, Body body) {
  if (plan.trials == 0) throw DomainError("a sample plan needs at least one trial");
  std::vector<Result> out(plan.trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(plan.threads, static_cast<unsigned>(plan.trials)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < plan.trials; i += workers) {
      const std::uint64_t seed = trial_seed(plan.master_seed, i);
      Rng rng(seed);
      out[i] = body(seed, rng);
    }
  };
  if (workers == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

double TrialSummary::quantile(double p) const {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

TrialSummary summarize(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("cannot summarize an empty sample");
  std::sort(samples.begin(), samples.end());
  TrialSummary s;
  s.count = samples.size();
  const Eigen::Map<const Eigen::ArrayXd> x(samples.data(), static_cast<Eigen::Index>(samples.size()));
  s.mean = x.mean();
  if (s.count > 1) {
    const double variance = (x - s.mean).square().sum() / static_cast<double>(s.count - 1);
    s.stderr_mean = std::sqrt(variance / static_cast<double>(s.count));
  }
  s.min = samples.front();
  s.max = samples.back();
  s.sorted = std::move(samples);
  return s;
}

std::uint64_t draw_T(std::uint32_t n, std::uint32_t m, Rng& rng) {
  if (n < 1 || m < 1) throw DomainError("draw_T needs n, m >= 1");
  std::vector<std::uint32_t> counts(n, 0);
  std::uint32_t remaining = n;
  std::uint64_t t = 0;
  while (remaining > 0) {
    const auto c = uniform_below(rng, n);
    ++t;
    if (++counts[c] == m) --remaining;
  }
  return t;
}

std::uint64_t draw_general_event(const ThresholdSpec& spec, Rng& rng) {
  const std::uint32_t n = spec.coupons();
  const auto& thresholds = spec.thresholds();
  std::vector<std::uint32_t> counts(n, 0);
  // reached[j]: coupons holding at least m_j copies
  std::vector<std::uint32_t> reached(thresholds.size(), 0);
  std::size_t unmet = thresholds.size();
  std::uint64_t t = 0;
  while (unmet > 0) {
    const auto c = uniform_below(rng, n);
    ++t;
    const std::uint32_t now = ++counts[c];
    for (std::size_t j = 0; j < thresholds.size(); ++j)
      if (now == thresholds[j].copies && ++reached[j] == thresholds[j].coupons) --unmet;
  }
  return t;
}

std::vector<double> sample_T_values(std::uint32_t n, std::uint32_t m, const SamplePlan& plan) {
  if (n < 1 || m < 1) throw DomainError("sample_T needs n, m >= 1");
  return run_trials<double>(plan, [n, m](std::uint64_t, Rng& rng) { return static_cast<double>(draw_T(n, m, rng)); });
}

std::vector<double> sample_general_event_values(const ThresholdSpec& spec, const SamplePlan& plan) {
  return run_trials<double>(
      plan, [&spec](std::uint64_t, Rng& rng) { return static_cast<double>(draw_general_event(spec, rng)); });
}

TrialSummary sample_T(std::uint32_t n, std::uint32_t m, const SamplePlan& plan) {
  return summarize(sample_T_values(n, m, plan));
}

TrialSummary sample_general_event(const ThresholdSpec& spec, const SamplePlan& plan) {
  return summarize(sample_general_event_values(spec, plan));
}

std::vector<TrialRecord> sample_codec_records(const GenerationConfig& config, const SamplePlan& plan) {
  return run_trials<TrialRecord>(plan, [&config](std::uint64_t seed, Rng& rng) {
    TrialRecord r = run_trial(config, rng);
    r.seed = seed;
    return r;
  });
}

std::vector<TrialRecord> sample_codec_records_with_payload(const GenerationConfig& config,
                                                           const SamplePlan& plan) {
  return run_trials<TrialRecord>(plan, [&config](std::uint64_t seed, Rng& rng) {
    // The source comes from a separate stream so the encoding draws match dof-only trials.
    Rng source_rng(mix64(seed ^ 0x5EED5EED5EED5EEDULL));
    const SourceBlock source = random_source(config, source_rng);
    TrialRecord r = run_trial(config, source, rng);
    r.seed = seed;
    return r;
  });
}

TrialSummary summarize_records(const std::vector<TrialRecord>& records) {
  std::vector<double> totals;
  totals.reserve(records.size());
  for (const auto& r : records) totals.push_back(static_cast<double>(r.total));
  return summarize(std::move(totals));
}

TrialSummary sample_codec(const GenerationConfig& config, const SamplePlan& plan) {
  return summarize_records(sample_codec_records(config, plan));
}

double markov_oracle(const ThresholdSpec& spec, std::uint64_t state_cap) {
  const std::uint32_t n = spec.coupons();
  const std::uint32_t cap = spec.thresholds().front().copies;
  const std::uint64_t radix = std::uint64_t{cap} + 1;
  std::uint64_t states = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (states > state_cap / radix) {
      throw ResourceError("Markov oracle state space (m_1 + 1)^n = " + std::to_string(radix) + "^" +
                              std::to_string(n) + " exceeds the cap of " + std::to_string(state_cap),
                          states * radix, state_cap);
    }
    states *= radix;
  }

  // State index = sum_i c_i radix^i, so every transition raises the index.
  std::vector<std::uint64_t> stride(n);
  for (std::uint32_t i = 0; i < n; ++i) stride[i] = i == 0 ? 1 : stride[i - 1] * radix;

  const auto& thresholds = spec.thresholds();
  std::vector<std::uint32_t> counts(n, 0);
  auto satisfied = [&]() {
    for (const auto& t : thresholds) {
      std::uint32_t have = 0;
      for (auto c : counts) have += c >= t.copies;
      if (have < t.coupons) return false;
    }
    return true;
  };

  // Number the transient states in index order.
  std::vector<std::int64_t> transient(states, -1);
  std::int64_t n_transient = 0;
  for (std::uint64_t s = 0; s < states; ++s) {
    std::uint64_t rest = s;
    for (std::uint32_t i = 0; i < n; ++i) {
      counts[i] = static_cast<std::uint32_t>(rest % radix);
      rest /= radix;
    }
    if (!satisfied()) transient[s] = n_transient++;
  }
  if (transient[0] < 0) return 0.0;

  // (n - #capped) E(s) - sum_{i uncapped} E(s + e_i) = n
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n_transient) * (n + 1));
  for (std::uint64_t s = 0; s < states; ++s) {
    const std::int64_t row = transient[s];
    if (row < 0) continue;
    std::uint64_t rest = s;
    std::uint32_t capped = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::uint32_t>(rest % radix);
      rest /= radix;
      if (c == cap) {
        ++capped;
        continue;
      }
      const std::int64_t col = transient[s + stride[i]];
      if (col >= 0) entries.emplace_back(row, col, -1.0);
    }
    entries.emplace_back(row, row, static_cast<double>(n - capped));
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> system(n_transient, n_transient);
  system.setFromTriplets(entries.begin(), entries.end());
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n_transient, static_cast<double>(n));
  const Eigen::VectorXd expected = system.triangularView<Eigen::Upper>().solve(rhs);
  return expected[transient[0]];
}

std::vector<FailurePoint> empirical_failure_curve(const TrialSummary& samples, std::span<const double> t_grid) {
  if (samples.sorted.empty()) throw DomainError("failure curve needs at least one sample");
  const auto& v = samples.sorted;
  const double count = static_cast<double>(v.size());
  std::vector<FailurePoint> curve;
  curve.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = v.end() - std::upper_bound(v.begin(), v.end(), t);
    curve.push_back({t, static_cast<double>(above) / count});
  }
  return curve;
}

nlohmann::ordered_json summary_to_json(const TrialSummary& summary) {
  nlohmann::ordered_json j;
  j["mean"] = summary.mean;
  j["stderr"] = summary.stderr_mean;
  j["count"] = summary.count;
  j["min"] = summary.min;
  j["max"] = summary.max;
  nlohmann::ordered_json q;
  for (int pct : {1, 5, 25, 50, 75, 95, 99}) q[std::to_string(pct)] = summary.quantile(pct / 100.0);
  j["quantiles"] = q;
  return j;
}

}  // namespace gencoupon
