#pragma once

#include <cstdint>
#include <limits>
#include <optional>

namespace gencoupon {

/// A copy count that may be infinite (the sentinel m_0) or zero (m_{A+1}).
class Multiplicity {
 public:
  constexpr Multiplicity(std::uint32_t m) : value_(m) {}  // NOLINT: implicit by intent
  static constexpr Multiplicity infinite() { return Multiplicity(); }

  constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
  /// Finite value; must not be called on the infinite sentinel.
  constexpr std::uint32_t value() const { return *value_; }

  friend constexpr bool operator==(Multiplicity, Multiplicity) = default;

 private:
  constexpr Multiplicity() = default;
  std::optional<std::uint32_t> value_;
};

/// Truncated exponential series S_m(x) = sum_{i<m} x^i / i!, with S_inf = e^x, S_0 = 0.
/// Throws DomainError for x < 0.
double s_poly(Multiplicity m, double x);

/// ln k!
double log_factorial(double k);
/// ln C(n, k)
double log_binomial(std::uint64_t n, std::uint64_t k);

/// Poisson(x) probability of exactly k.
double poisson_pmf(std::uint32_t k, double x);

/// Pr[Poisson(x) < m] = S_m(x) e^{-x}, the regularized upper incomplete gamma Q(m, x).
double poisson_head(std::uint32_t m, double x);

/// Pr[Poisson(x) >= m] = 1 - S_m(x) e^{-x}, the regularized lower incomplete gamma P(m, x).
/// Summed directly rather than by subtraction, so it keeps full relative accuracy when small.
double poisson_tail(std::uint32_t m, double x);

/// Pr[lo <= Poisson(x) < hi] = (S_hi(x) - S_lo(x)) e^{-x}; `hi` may be infinite.
double poisson_band(Multiplicity lo, Multiplicity hi, double x);

/// Both Poisson tails at once, each accurate relative to itself.
struct PoissonSplit {
  double head;  // Pr[X < m]
  double tail;  // Pr[X >= m]
};
PoissonSplit poisson_split(std::uint32_t m, double x);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace gencoupon
