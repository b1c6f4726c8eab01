#include "gencoupon/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gencoupon/codec.hpp"
#include "gencoupon/sim.hpp"

namespace gencoupon {

namespace {

// Every valid threshold profile over n coupons with m_1 <= max_copies.
void collect_specs(std::uint32_t n, std::uint32_t max_copies, std::vector<Threshold>& prefix,
                   std::vector<ThresholdSpec>& out) {
  const std::uint32_t k_from = prefix.empty() ? 1 : prefix.back().coupons + 1;
  const std::uint32_t m_to = prefix.empty() ? max_copies : prefix.back().copies - 1;
  for (std::uint32_t k = k_from; k <= n; ++k) {
    for (std::uint32_t m = 1; m <= m_to; ++m) {
      prefix.push_back({k, m});
      out.emplace_back(n, prefix);
      collect_specs(n, max_copies, prefix, out);
      prefix.pop_back();
    }
  }
}

CheckResult check_specialization(bool quick) {
  constexpr double tol = 1e-8;
  const std::uint32_t n_max = quick ? 5 : 10;
  const std::uint32_t m_max = quick ? 3 : 4;
  CheckResult r{"specialization-chain", true, 0.0, 2 * tol, ""};
  for (std::uint32_t n = 2; n <= n_max; ++n) {
    for (std::uint32_t m = 1; m <= m_max; ++m) {
      const double et = expected_T(n, m, tol).value;
      const double general = expected_general(ThresholdSpec(n, {{n, m}}), tol).value;
      const double k_of_n = expected_k_of_n(n, n, m, tol).value;
      r.deviation = std::max({r.deviation, std::abs(general - et), std::abs(k_of_n - et)});
    }
  }
  r.passed = r.deviation <= r.limit;
  r.detail = "n<=" + std::to_string(n_max) + " m<=" + std::to_string(m_max);
  return r;
}

CheckResult check_oracle(bool quick) {
  const std::uint32_t n_max = quick ? 3 : 4;
  CheckResult r{"markov-oracle-agreement", true, 0.0, 1e-6, ""};
  std::size_t count = 0;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    std::vector<ThresholdSpec> specs;
    std::vector<Threshold> prefix;
    collect_specs(n, 3, prefix, specs);
    for (const auto& spec : specs) {
      const double exact = markov_oracle(spec);
      const double quad = expected_general(spec, 1e-9).value;
      r.deviation = std::max(r.deviation, std::abs(exact - quad));
      ++count;
    }
  }
  r.passed = r.deviation <= r.limit;
  r.detail = std::to_string(count) + " specs, n<=" + std::to_string(n_max) + " m_1<=3";
  return r;
}

CheckResult check_rank_law(const ValidationOptions& options) {
  const std::size_t trials = options.quick ? 20'000 : 100'000;
  CheckResult r{"rank-distribution-law", true, 0.0, 3.0, ""};
  const Field gf2 = Field::prime(2);
  for (std::uint32_t h = 1; h <= 3; ++h) {
    const GenerationConfig config(h, h, 1, gf2);
    const SamplePlan plan{trials, trial_seed(options.seed, h), options.threads};
    const auto records = sample_codec_records(config, plan);
    for (std::uint32_t s = h; s <= h + 3; ++s) {
      const auto hits = std::count_if(records.begin(), records.end(),
                                      [s](const TrialRecord& rec) { return rec.per_generation[0] <= s; });
      const double p = cdf_Ni(2, h, s);
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
      const double empirical = static_cast<double>(hits) / static_cast<double>(trials);
      r.deviation = std::max(r.deviation, std::abs(empirical - p) / sigma);
    }
  }
  r.passed = r.deviation <= r.limit;
  r.detail = "q=2 h<=3, deviation in binomial sigmas over " + std::to_string(trials) + " trials";
  return r;
}

CheckResult check_bound_ordering(const BoundConstants& constants) {
  CheckResult r{"ccdf-bound-ordering", true, 0.0, 0.0, ""};
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint32_t q : {2u, 16u, 256u}) {
    for (std::uint32_t h : {1u, 2u, 4u, 16u}) {
      for (std::uint64_t s = h + 1; s <= h + 8; ++s) {
        const CcdfBound b = ccdf_Ni_bound(q, h, s, constants);
        if (!(b.gap_qh > 0.0 && b.gap_2inf >= 0.0)) {
          r.passed = false;
          std::ostringstream os;
          os << "violated at q=" << q << " h=" << h << " s=" << s;
          if (r.detail.empty()) r.detail = os.str();
        }
        worst = std::min({worst, b.gap_qh, b.gap_2inf});
      }
    }
  }
  // reported as the smallest gap found; negative means violated
  r.deviation = worst;
  if (r.passed) r.detail = "q in {2,16,256}, h in {1,2,4,16}, s in h+1..h+8";
  return r;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_specialization(options.quick));
  results.push_back(check_oracle(options.quick));
  results.push_back(check_rank_law(options));
  results.push_back(check_bound_ordering(options.constants));
  return results;
}

}  // namespace gencoupon
