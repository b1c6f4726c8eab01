#include <doctest.h>

#include <cmath>

#include "gencoupon/errors.hpp"
#include "gencoupon/quadrature.hpp"
#include "gencoupon/special.hpp"

using namespace gencoupon;

TEST_CASE("exponential integrals") {
  const IntegralResult r = integrate({[](double x) { return std::exp(-x); }, {1.0, 1}, 1e-10});
  CHECK(std::abs(r.value - 1.0) <= 1e-10);
  CHECK(std::abs(r.value - 1.0) <= r.abs_error);
  CHECK(r.abs_error <= 1e-10);

  const IntegralResult s3 = integrate({[](double x) { return s_poly(3, x) * std::exp(-x); }, {1.0, 3}, 1e-10});
  CHECK(std::abs(s3.value - 3.0) <= 1e-10);
}

TEST_CASE("brotherhood integrand n = m = 2") {
  auto f = [](double x) {
    const double head = poisson_head(2, x);
    return 1.0 - (1.0 - head) * (1.0 - head);
  };
  const IntegralResult r = integrate({f, {2.0, 2}, 1e-9});
  CHECK(std::abs(r.value - 2.75) <= 1e-8);
  CHECK(std::abs(2.0 * r.value - 5.5) <= 2e-8);
}

TEST_CASE("truncation point") {
  const double x = truncation_point(1.0, 1, 1e-8);
  CHECK(x == doctest::Approx(std::log(2e8)).epsilon(1e-6));
  CHECK(majorant_tail({1.0, 1}, x) <= 0.5e-8);
  CHECK(truncation_point(2.0, 1, 1e-8) > x);
  CHECK(truncation_point(1.0, 2, 1e-8) > x);
  CHECK(truncation_point(10.0, 5, 1e-8) > truncation_point(5.0, 5, 1e-8));
  CHECK(truncation_point(10.0, 100, 1e-8) > 100.0);
  CHECK_THROWS_AS(truncation_point(1.0, 1, 0.0), DomainError);
}

TEST_CASE("majorant tail closed form matches direct integration") {
  for (std::uint32_t m : {1u, 3u, 12u}) {
    const double cut = 4.0;
    const IntegralResult direct =
        integrate({[m, cut](double x) { return s_poly(m, x + cut) * std::exp(-(x + cut)); }, {1.0, m}, 1e-12});
    CHECK(majorant_tail({1.0, m}, cut) == doctest::Approx(direct.value).epsilon(1e-10));
  }
}

TEST_CASE("moments of the exponential: x^k e^{-x} integrates to k!") {
  for (int k = 0; k <= 20; ++k) {
    const double factorial = std::tgamma(k + 1.0);
    auto f = [k](double x) { return std::exp(k * std::log(x) - x); };
    // x^k e^{-x} <= k! S_{k+1}(x) e^{-x}
    const IntegralResult r = integrate({[k, f](double x) { return k == 0 ? std::exp(-x) : f(x); },
                                        {factorial, static_cast<std::uint32_t>(k + 1)},
                                        1e-10 * factorial});
    CHECK(std::abs(r.value / factorial - 1.0) <= 1e-9);
  }
}

TEST_CASE("halving the tolerance") {
  auto f = [](double x) {
    const double tail = poisson_tail(3, x);
    return -std::expm1(7.0 * std::log(tail));
  };
  double tol = 1e-4;
  IntegralResult previous = integrate({f, {7.0, 3}, tol});
  for (int i = 0; i < 12; ++i) {
    tol *= 0.5;
    const IntegralResult next = integrate({f, {7.0, 3}, tol});
    CHECK(next.abs_error <= previous.abs_error);
    CHECK(std::abs(next.value - previous.value) <= next.abs_error + previous.abs_error);
    previous = next;
  }
}

TEST_CASE("deterministic results") {
  auto f = [](double x) { return 1.0 - std::pow(-std::expm1(-x), 30.0); };
  const IntegralResult a = integrate({f, {30.0, 1}, 1e-11});
  const IntegralResult b = integrate({f, {30.0, 1}, 1e-11});
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);
  CHECK(a.panels == b.panels);
}

TEST_CASE("panel limit raises a numeric error with the partial value") {
  auto f = [](double x) { return std::exp(-x) * (1.0 + 0.5 * std::sin(40.0 * x)); };
  try {
    integrate({f, {1.5, 1}, 1e-14, 20});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.partial_value() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(e.partial_error() > 1e-14);
  }
}
