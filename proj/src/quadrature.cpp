#include "gencoupon/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "gencoupon/errors.hpp"
#include "gencoupon/special.hpp"

namespace gencoupon {

namespace {

// Kronrod abscissae on [-1, 1] (positive half); odd indices are the Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double magnitude = std::abs(kronrod);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    magnitude += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  // |K15 - G7| bounds the error of G7 and so, conservatively, of K15; a
  // rounding floor keeps converged panels from being split forever.
  const double rounding = 50.0 * std::numeric_limits<double>::epsilon() * magnitude * half;
  const double error = std::max(std::abs(kronrod - gauss) * half, rounding);
  return {a, b, kronrod * half, error};
}

struct LargerError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

}  // namespace

double majorant_tail(const TailMajorant& majorant, double x) {
  // sum_{i<m} Gamma(i+1, x)/i! = sum_{i<m} Pr[Pois(x) <= i] = sum_{j<m} (m - j) pmf(j, x)
  const std::uint32_t m = majorant.terms;
  if (m == 0) return 0.0;
  double sum = 0.0;
  if (x >= static_cast<double>(m)) {
    // Terms shrink walking down from j = m - 1.
    double pmf = poisson_pmf(m - 1, x);
    for (std::uint32_t j = m; j-- > 0;) {
      const double term = static_cast<double>(m - j) * pmf;
      sum += term;
      if (term < sum * 1e-18) break;
      if (j > 0) pmf *= static_cast<double>(j) / x;
    }
  } else {
    for (std::uint32_t j = 0; j < m; ++j) sum += static_cast<double>(m - j) * poisson_pmf(j, x);
  }
  return majorant.scale * sum;
}

double truncation_point(double scale, std::uint32_t m, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const TailMajorant majorant{scale, m};
  const double target = 0.5 * tol;
  double lo = 0.0;
  if (majorant_tail(majorant, lo) <= target) return lo;
  double hi = std::max(1.0, static_cast<double>(m));
  while (majorant_tail(majorant, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericError("no truncation point found", 0.0, 0.0);
  }
  while (hi - lo > 1e-9 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (majorant_tail(majorant, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

IntegralResult integrate(const IntegralTask& task) {
  if (!(task.tol > 0.0)) throw DomainError("tolerance must be positive");
  IntegralResult result;
  result.cut = truncation_point(task.majorant.scale, task.majorant.terms, task.tol);
  result.tail_bound = majorant_tail(task.majorant, result.cut);
  const double panel_budget = task.tol - result.tail_bound;

  std::priority_queue<Panel, std::vector<Panel>, LargerError> queue;
  constexpr int kInitialPanels = 16;
  double total_error = 0.0;
  if (result.cut > 0.0) {
    for (int i = 0; i < kInitialPanels; ++i) {
      const double a = result.cut * i / kInitialPanels;
      const double b = result.cut * (i + 1) / kInitialPanels;
      Panel p = gauss_kronrod(task.integrand, a, b);
      total_error += p.error;
      queue.push(p);
    }
  }

  auto finish = [&]() {
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
      panels.push_back(queue.top());
      queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    result.value = value;
    result.abs_error = error + result.tail_bound;
    result.panels = panels.size();
  };

  while (!queue.empty() && total_error > panel_budget) {
    if (queue.size() >= task.max_panels) {
      finish();
      throw NumericError("quadrature panel limit " + std::to_string(task.max_panels) +
                             " reached; estimated error " + std::to_string(result.abs_error) +
                             " > tol " + std::to_string(task.tol),
                         result.value, result.abs_error);
    }
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      finish();
      throw NumericError("quadrature panel width underflow at x = " + std::to_string(worst.a),
                         result.value, result.abs_error);
    }
    queue.pop();
    const Panel left = gauss_kronrod(task.integrand, worst.a, mid);
    const Panel right = gauss_kronrod(task.integrand, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  finish();
  return result;
}

}  // namespace gencoupon
