#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gencoupon/special.hpp"

namespace gencoupon {

enum class Method { exact_sum, closed_form, quadrature, asymptotic };
std::string to_string(Method method);

struct TheoryResult {
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::exact_sum;
};

/// One requirement "at least `copies` copies of at least `coupons` coupons".
struct Threshold {
  std::uint32_t coupons;  // k_j
  std::uint32_t copies;   // m_j
};

/// Target event of the general brotherhood waiting time: for every j, at least
/// k_j of the n coupons have been drawn at least m_j times. Requires
/// 1 <= k_1 < ... < k_A <= n and m_1 > ... > m_A >= 1.
class ThresholdSpec {
 public:
  /// Throws DomainError on an invalid profile.
  ThresholdSpec(std::uint32_t coupons, std::vector<Threshold> thresholds);

  /// Parse "k1:m1,k2:m2,...".
  static ThresholdSpec parse(std::uint32_t coupons, const std::string& text);

  std::uint32_t coupons() const noexcept { return n_; }
  const std::vector<Threshold>& thresholds() const noexcept { return thresholds_; }
  std::size_t levels() const noexcept { return thresholds_.size(); }
  /// m_j with m_0 = infinity and m_{A+1} = 0.
  Multiplicity copies(std::size_t j) const;
  std::string to_string() const;

 private:
  std::uint32_t n_;
  std::vector<Threshold> thresholds_;
};

// ---------------------------------------------------------------------------
// Rank statistics of one generation.

/// E[N_i] = sum_{j<h} 1 / (1 - q^{j-h}).
TheoryResult expected_Ni(std::uint32_t q, std::uint32_t h);

/// Integral approximation h + q^{-1}/(1 - q^{-1}) + log_q((1 - q^{-h})/(1 - q^{-1})).
double expected_Ni_upper_approx(std::uint32_t q, std::uint32_t h);

/// Pr[N_i <= s]: probability that an h x s uniform matrix over GF(q) has full row rank.
double cdf_Ni(std::uint32_t q, std::uint32_t h, std::uint64_t s);

/// alpha_{q,h} = -ln Pr[N_i <= h].
double alpha(std::uint32_t q, std::uint32_t h);
/// alpha_{2,inf} = -ln prod_{k>=1} (1 - 2^{-k}).
double alpha_2_inf();

/// Overrides of the CCDF bound constants, used to inject faults in validation.
struct BoundConstants {
  double alpha_qh_scale = 1.0;
  double alpha_2inf_scale = 1.0;
};

struct CcdfBound {
  double exact;       // Pr[N_i > s]
  double bound_qh;    // 1 - exp(-alpha_{q,h} q^{-(s-h)})
  double bound_2inf;  // 1 - exp(-alpha_{2,inf} q^{-(s-h)})
  // bound_qh - exact and bound_2inf - bound_qh, evaluated without cancellation.
  double gap_qh;
  double gap_2inf;
};

/// Exact CCDF of N_i and its two exponential upper bounds. Throws DomainError for s < h.
CcdfBound ccdf_Ni_bound(std::uint32_t q, std::uint32_t h, std::uint64_t s,
                        const BoundConstants& constants = {});

// ---------------------------------------------------------------------------
// Waiting times of the collector's brotherhood problem.

inline constexpr std::uint64_t kDefaultChainCap = 10'000'000;

/// E[T(n, m)] = n int_0^inf [1 - (1 - S_m(x) e^{-x})^n] dx.
TheoryResult expected_T(std::uint32_t n, std::uint32_t m, double tol);

/// Expected waiting time for the event described by `spec`, by summing the
/// Poissonized chain expansion over 0 = i_0 <= i_1 <= ... <= i_A <= i_{A+1} = n,
/// k_j <= i_j. Throws ResourceError when the chain count exceeds `chain_cap`.
TheoryResult expected_general(const ThresholdSpec& spec, double tol,
                              std::uint64_t chain_cap = kDefaultChainCap);

/// Number of chains expected_general would enumerate (saturates at UINT64_MAX).
std::uint64_t chain_count(const ThresholdSpec& spec);

/// Expected waiting time until at least k of the n coupons have m copies each.
TheoryResult expected_k_of_n(std::uint32_t n, std::uint32_t k, std::uint32_t m, double tol);

/// n ln n + (m-1) n ln ln n + (gamma - ln (m-1)!) n. `m` may be a real plug-in
/// (ln (m-1)! is then ln Gamma(m)). Throws DomainError for n < 2.
double asymptotic_T(double n, double m);

/// The m >> 1 limit n m.
double large_m_T(double n, double m);

/// exp(-e^{-y} / (m-1)!).
double limit_cdf(double y, double m);

/// 1 - exp[-n (ln n)^{h-1} e^{-t/n} / (h-1)!], the leading term of the
/// decoding failure lower bound; the additive O(ln ln n / ln n) term is not included.
double failure_lower_bound(double n, double h, double t);

}  // namespace gencoupon
