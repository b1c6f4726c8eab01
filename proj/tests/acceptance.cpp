// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gencoupon/cli.hpp"
#include "gencoupon/sim.hpp"
#include "gencoupon/theory.hpp"
#include "oracles.hpp"

using namespace gencoupon;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Verdict exactness_anchors() {
  auto start = std::chrono::steady_clock::now();
  double worst_m = 0.0;
  for (std::uint32_t m = 1; m <= 20; ++m) worst_m = std::max(worst_m, std::abs(expected_T(1, m, 1e-10).value - m));
  const double t1 = seconds_since(start);

  start = std::chrono::steady_clock::now();
  double worst_rel = 0.0;
  for (std::uint32_t n = 2; n <= 100; ++n) {
    const double exact = n * oracle::harmonic(n);
    worst_rel = std::max(worst_rel, std::abs(expected_T(n, 1, 1e-8).value - exact) / exact);
  }
  const double t2 = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const double markov = markov_oracle(ThresholdSpec(2, {{2, 2}}));
  const double dev22 = std::abs(expected_T(2, 2, 1e-9).value - markov);
  const double t3 = seconds_since(start);

  const bool ok = worst_m <= 1e-9 && worst_rel <= 1e-6 && dev22 <= 1e-8 && std::abs(markov - 5.5) <= 1e-12 &&
                  std::max({t1, t2, t3}) < 1.0;
  return {ok, format("max|E[T(1,m)]-m|=%.2e (<=1e-9), max rel err vs nH_n=%.2e (<=1e-6), "
                     "|E[T(2,2)]-markov|=%.2e (<=1e-8), markov=%.12g, times %.3f/%.3f/%.3f s (<1 s)",
                     worst_m, worst_rel, dev22, markov, t1, t2, t3)};
}

Verdict specialization_chain() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double tol = 1e-8;
  double worst_general = 0.0, worst_k = 0.0;
  for (std::uint32_t n = 2; n <= 10; ++n)
    for (std::uint32_t m = 1; m <= 4; ++m) {
      const double base = expected_T(n, m, tol).value;
      worst_general = std::max(worst_general, std::abs(expected_general(ThresholdSpec(n, {{n, m}}), tol).value - base));
      worst_k = std::max(worst_k, std::abs(expected_k_of_n(n, n, m, tol).value - base));
    }
  const double elapsed = seconds_since(start);
  const bool ok = worst_general <= 2 * tol && worst_k <= 2 * tol && elapsed < 60.0;
  return {ok, format("general(A=1,k=n) max dev %.2e, k-of-n(k=n) max dev %.2e (<= %.0e), %.2f s (<60 s)",
                     worst_general, worst_k, 2 * tol, elapsed)};
}

// Every valid profile with n <= max_n and m_1 <= max_m.
std::vector<ThresholdSpec> all_specs(std::uint32_t max_n, std::uint32_t max_m) {
  std::vector<ThresholdSpec> specs;
  for (std::uint32_t n = 1; n <= max_n; ++n)
    for (std::uint32_t kmask = 1; kmask < (1u << n); ++kmask)
      for (std::uint32_t mmask = 1; mmask < (1u << max_m); ++mmask) {
        if (std::popcount(kmask) != std::popcount(mmask)) continue;
        std::vector<std::uint32_t> ks, ms;
        for (std::uint32_t b = 0; b < n; ++b)
          if (kmask >> b & 1u) ks.push_back(b + 1);
        for (std::uint32_t b = max_m; b-- > 0;)
          if (mmask >> b & 1u) ms.push_back(b + 1);
        std::vector<Threshold> t;
        for (std::size_t j = 0; j < ks.size(); ++j) t.push_back({ks[j], ms[j]});
        specs.emplace_back(n, t);
      }
  return specs;
}

Verdict oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto specs = all_specs(4, 3);
  double worst = 0.0;
  std::string worst_spec;
  for (const auto& spec : specs) {
    const double dev = std::abs(expected_general(spec, 1e-9).value - markov_oracle(spec));
    if (dev >= worst) {
      worst = dev;
      worst_spec = std::to_string(spec.coupons()) + "/" + spec.to_string();
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-6 && elapsed < 300.0,
          format("%zu specs, max dev %.2e at n/spec=%s (<=1e-6), %.2f s (<300 s)", specs.size(), worst,
                 worst_spec.c_str(), elapsed)};
}

Verdict distribution_law() {
  constexpr std::size_t trials = 100'000;
  double worst_sigma = 0.0;
  bool ok = true;
  for (std::uint32_t h = 1; h <= 3; ++h) {
    const GenerationConfig config(h, h, 1, Field::prime(2));
    const auto records = sample_codec_records(config, {trials, 1000 + h, 1});
    for (std::uint64_t s = h; s <= h + 3; ++s) {
      const double p = cdf_Ni(2, h, s);
      const auto hits = std::count_if(records.begin(), records.end(),
                                      [&](const TrialRecord& r) { return r.per_generation[0] <= s; });
      const double sigma = std::sqrt(p * (1 - p) / trials);
      const double z = std::abs(static_cast<double>(hits) / trials - p) / sigma;
      worst_sigma = std::max(worst_sigma, z);
      ok = ok && z <= 3.0;
    }
  }
  // every binary h x s matrix, counted by rank
  std::uint64_t mismatches = 0, cases = 0;
  for (std::uint32_t h = 1; h <= 3; ++h)
    for (std::uint32_t s = 1; s <= 4; ++s) {
      const std::uint64_t full = oracle::count_full_rank_binary(h, s);
      std::uint64_t product = 1;
      for (std::uint32_t k = 0; k < h; ++k) product *= s >= k ? (std::uint64_t{1} << s) - (std::uint64_t{1} << k) : 0;
      if (h > s) product = 0;
      const double scaled = cdf_Ni(2, h, s) * std::ldexp(1.0, static_cast<int>(h * s));
      ++cases;
      if (full != product || scaled != static_cast<double>(full)) ++mismatches;
    }
  ok = ok && mismatches == 0;
  return {ok, format("max |emp-exact|/sigma=%.2f over 12 (h,s) cells (<=3), enumeration %llu/%llu cells exact",
                     worst_sigma, static_cast<unsigned long long>(cases - mismatches),
                     static_cast<unsigned long long>(cases))};
}

Verdict headline() {
  const auto start = std::chrono::steady_clock::now();
  const GenerationConfig config(1000, 100, 1, Field::gf256());
  const TrialSummary s = sample_codec(config, {30'000, 0, 1});
  const double elapsed = seconds_since(start);
  const TheoryResult et = expected_T(10, 100, 1e-8);
  const double ratio = s.mean / 1000.0;
  const double z = std::abs(et.value - s.mean) / s.stderr_mean;
  const bool ok = ratio <= 1.16 && z <= 3.0 && s.count >= 1000 && elapsed < 600.0;
  return {ok, format("%zu trials: mean T=%.3f, stderr=%.3f, mean/N=%.5f (<=1.16); E[T(10,100)]=%.6f, "
                     "|diff|=%.2f stderr (<=3); %.1f s (<600 s)",
                     s.count, s.mean, s.stderr_mean, ratio, et.value, z, elapsed)};
}

Verdict bound_ordering() {
  std::size_t cells = 0, violations = 0, direct = 0;
  double min_gap_qh = 1.0, min_gap_2inf = 1.0;
  for (std::uint32_t q : {2u, 16u, 256u})
    for (std::uint32_t h : {1u, 2u, 4u, 16u})
      for (std::uint64_t s = h + 1; s <= h + 8; ++s) {
        const CcdfBound b = ccdf_Ni_bound(q, h, s);
        ++cells;
        min_gap_qh = std::min(min_gap_qh, b.gap_qh);
        min_gap_2inf = std::min(min_gap_2inf, b.gap_2inf);
        bool bad = !(b.gap_qh > 0.0) || !(b.gap_2inf >= 0.0);
        // wherever double rounding can tell the values apart, the plain comparison must agree
        if (b.exact != b.bound_qh) {
          ++direct;
          bad = bad || !(b.exact < b.bound_qh);
        }
        bad = bad || !(b.bound_qh <= b.bound_2inf);
        if (bad) ++violations;
      }
  return {violations == 0, format("%zu cells, %zu violations; min gap(exact,qh)=%.3e (>0), min gap(qh,2inf)=%.3e "
                                  "(>=0); %zu cells also separated in plain doubles",
                                  cells, violations, min_gap_qh, min_gap_2inf, direct)};
}

Verdict limit_law() {
  std::vector<double> sup_gap;
  bool ok = true;
  double worst_shortfall = -1.0;
  for (std::uint32_t n : {100u, 1000u}) {
    const TrialSummary s = sample_T(n, 2, {10'000, 7000 + n, 1});
    std::vector<double> grid;
    const double hi = 3.0 * n * std::log(static_cast<double>(n));
    for (double t = n; t <= hi; t += 1.0) grid.push_back(t);
    double gap = 0.0;
    for (const auto& p : empirical_failure_curve(s, grid)) {
      const double bound = failure_lower_bound(n, 2, p.t);
      worst_shortfall = std::max(worst_shortfall, bound - p.fraction_above);
      ok = ok && p.fraction_above >= bound - 0.10;
      gap = std::max(gap, std::abs(p.fraction_above - bound));
    }
    sup_gap.push_back(gap);
  }
  ok = ok && sup_gap[1] < sup_gap[0];
  return {ok, format("max (bound - empirical)=%.4f (<=0.10); sup gap n=100: %.4f, n=1000: %.4f (must shrink)",
                     worst_shortfall, sup_gap[0], sup_gap[1])};
}

Verdict asymptotic_consistency() {
  std::vector<double> err;
  std::string trace;
  for (std::uint32_t n : {10u, 100u, 1000u, 10000u}) {
    err.push_back(std::abs(asymptotic_T(n, 1) / expected_T(n, 1, 1e-6).value - 1.0));
    trace += format(" n=%u:%.3e", n, err.back());
  }
  bool ok = err.back() < 0.02;
  for (std::size_t i = 1; i < err.size(); ++i) ok = ok && err[i] < err[i - 1];
  return {ok, "relative error" + trace + " (decreasing, last < 0.02)"};
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "coupon", "--n", "20", "--m", "3", "--trials", "2000", "--seed", "11"},
      {"simulate", "general-event", "--n", "6", "--spec", "2:3,6:1", "--trials", "2000", "--seed", "11"},
      {"simulate", "rlnc", "--N", "100", "--h", "10", "--trials", "300", "--seed", "11"},
      {"simulate", "rlnc", "--N", "40", "--h", "4", "--d", "4", "--q", "251", "--trials", "200", "--payload"},
      {"figure", "a", "--N", "60", "--trials", "200", "--seed", "11"},
      {"figure", "b", "--n", "60", "--trials", "1000", "--seed", "11"},
      {"figure", "b", "--n", "60", "--trials", "500", "--seed", "11", "--format", "json"}};
  std::size_t identical = 0;
  for (const auto& base : commands) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "1"}) {
      std::vector<std::string> args;
      args.insert(args.end(), base.begin(), base.end());
      args.insert(args.end(), {"--threads", threads});
      std::ostringstream out, err;
      if (run_cli(args, out, err) != kExitOk) outputs.push_back("exit failure: " + err.str());
      else outputs.push_back(out.str());
    }
    if (outputs[0] == outputs[1] && outputs[0] == outputs[2] && outputs[0].rfind("exit failure", 0) != 0) ++identical;
  }
  return {identical == commands.size(),
          format("%zu/%zu commands byte-identical across threads=1, threads=8 and a rerun", identical,
                 commands.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 exactness anchors", exactness_anchors},
      {"2 specialization chain", specialization_chain},
      {"3 oracle equivalence", oracle_equivalence},
      {"4 rank distribution law", distribution_law},
      {"5 headline overhead", headline},
      {"6 ccdf bound ordering", bound_ordering},
      {"7 failure curve vs lower bound", limit_law},
      {"8 asymptotic consistency", asymptotic_consistency},
      {"9 thread determinism", determinism}};
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", v.passed ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += v.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
