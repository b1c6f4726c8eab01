#include "gencoupon/special.hpp"

#include <cmath>
#include <string>

#include "gencoupon/errors.hpp"

namespace gencoupon {

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw DomainError("argument must be >= 0, got " + std::to_string(x));
}

// sum_{i >= m} pmf(i) for x < m + 1; terms decrease from the first.
double upper_series(std::uint32_t m, double x) {
  double term = poisson_pmf(m, x);
  double sum = term;
  for (std::uint64_t i = m + 1; term > sum * 1e-17; ++i) {
    term *= x / static_cast<double>(i);
    sum += term;
  }
  return sum;
}

// sum_{i < m} pmf(i) for x >= m - 1; terms decrease walking down from m - 1.
double lower_series(std::uint32_t m, double x) {
  double term = poisson_pmf(m - 1, x);
  double sum = term;
  for (std::uint64_t i = m - 1; i > 0 && term > sum * 1e-17; --i) {
    term *= static_cast<double>(i) / x;
    sum += term;
  }
  return sum;
}

}  // namespace

double s_poly(Multiplicity m, double x) {
  require_nonnegative(x);
  if (m.is_infinite()) return std::exp(x);
  double term = 1.0;
  double sum = 0.0;
  for (std::uint32_t i = 0; i < m.value(); ++i) {
    sum += term;
    term *= x / static_cast<double>(i + 1);
    if (term == 0.0) break;
  }
  return sum;
}

double log_factorial(double k) { return std::lgamma(k + 1.0); }

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(static_cast<double>(n)) - log_factorial(static_cast<double>(k)) -
         log_factorial(static_cast<double>(n - k));
}

double poisson_pmf(std::uint32_t k, double x) {
  require_nonnegative(x);
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-x + static_cast<double>(k) * std::log(x) - log_factorial(static_cast<double>(k)));
}

PoissonSplit poisson_split(std::uint32_t m, double x) {
  require_nonnegative(x);
  if (m == 0) return {0.0, 1.0};
  if (x == 0.0) return {1.0, 0.0};
  if (x < static_cast<double>(m)) {
    const double tail = upper_series(m, x);
    return {1.0 - tail, tail};
  }
  const double head = lower_series(m, x);
  return {head, 1.0 - head};
}

double poisson_head(std::uint32_t m, double x) { return poisson_split(m, x).head; }

double poisson_tail(std::uint32_t m, double x) { return poisson_split(m, x).tail; }

double poisson_band(Multiplicity lo, Multiplicity hi, double x) {
  require_nonnegative(x);
  if (lo.is_infinite()) return 0.0;
  if (hi.is_infinite()) return poisson_tail(lo.value(), x);
  if (hi.value() <= lo.value()) return 0.0;
  if (lo.value() == 0) return poisson_head(hi.value(), x);
  // Finite band: add the pmf terms directly, all of them positive.
  double term = poisson_pmf(hi.value() - 1, x);
  double sum = term;
  for (std::uint32_t i = hi.value() - 1; i > lo.value(); --i) {
    term = x > 0.0 ? term * static_cast<double>(i) / x : 0.0;
    if (term == 0.0 || !std::isfinite(term)) {
      term = poisson_pmf(i - 1, x);
    }
    sum += term;
  }
  return sum;
}

}  // namespace gencoupon
