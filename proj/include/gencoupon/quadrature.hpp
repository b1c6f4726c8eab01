#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace gencoupon {

/// Closed-form majorant scale * S_terms(x) e^{-x} of an integrand's tail.
struct TailMajorant {
  double scale = 1.0;
  std::uint32_t terms = 1;
};

/// A nonnegative integrand on [0, inf) together with the bound that certifies
/// where it may be cut off.
struct IntegralTask {
  std::function<double(double)> integrand;
  TailMajorant majorant;
  double tol = 1e-10;
  std::size_t max_panels = 50000;
};

struct IntegralResult {
  double value = 0.0;
  double abs_error = 0.0;   // panel error + tail bound
  double cut = 0.0;         // truncation point X
  double tail_bound = 0.0;  // integral of the majorant over [X, inf)
  std::size_t panels = 0;
};

/// Integral of scale * S_terms(x) e^{-x} over [x, inf) = scale * sum_{i<terms} Gamma(i+1, x) / i!.
double majorant_tail(const TailMajorant& majorant, double x);

/// Smallest X (to bisection precision, rounded up) with
/// integral_X^inf scale * S_m(t) e^{-t} dt <= tol / 2.
double truncation_point(double scale, std::uint32_t m, double tol);

/// Adaptive Gauss-Kronrod (7/15) integration over [0, X] plus the certified
/// tail bound beyond X. Deterministic: the same task yields the same bits.
/// Throws NumericError (carrying the partial result) when the panel limit is hit.
IntegralResult integrate(const IntegralTask& task);

}  // namespace gencoupon
