#include "gencoupon/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "gencoupon/errors.hpp"
#include "gencoupon/quadrature.hpp"

namespace gencoupon {

std::string to_string(Method method) {
  switch (method) {
    case Method::exact_sum: return "exact-sum";
    case Method::closed_form: return "closed-form";
    case Method::quadrature: return "quadrature";
    case Method::asymptotic: return "asymptotic";
  }
  return "unknown";
}

ThresholdSpec::ThresholdSpec(std::uint32_t coupons, std::vector<Threshold> thresholds)
    : n_(coupons), thresholds_(std::move(thresholds)) {
  if (n_ < 1) throw DomainError("threshold spec needs n >= 1");
  if (thresholds_.empty()) throw DomainError("threshold spec needs at least one (k, m) pair");
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    const auto [k, m] = thresholds_[j];
    if (k < 1 || k > n_) throw DomainError("k must lie in [1, n], got " + std::to_string(k));
    if (m < 1) throw DomainError("m must be >= 1");
    if (j > 0 && !(k > thresholds_[j - 1].coupons && m < thresholds_[j - 1].copies))
      throw DomainError("thresholds need strictly increasing k and strictly decreasing m");
  }
}

ThresholdSpec ThresholdSpec::parse(std::uint32_t coupons, const std::string& text) {
  std::vector<Threshold> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("expected k:m, got '" + item + "'");
    try {
      std::size_t used_k = 0;
      std::size_t used_m = 0;
      const std::string ks = item.substr(0, colon);
      const std::string ms = item.substr(colon + 1);
      const unsigned long k = std::stoul(ks, &used_k);
      const unsigned long m = std::stoul(ms, &used_m);
      if (used_k != ks.size() || used_m != ms.size()) throw std::invalid_argument(item);
      pairs.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(m)});
    } catch (const std::logic_error&) {
      throw DomainError("expected k:m, got '" + item + "'");
    }
  }
  return ThresholdSpec(coupons, std::move(pairs));
}

Multiplicity ThresholdSpec::copies(std::size_t j) const {
  if (j == 0) return Multiplicity::infinite();
  if (j > thresholds_.size()) return 0;
  return thresholds_[j - 1].copies;
}

std::string ThresholdSpec::to_string() const {
  std::string out;
  for (const auto& t : thresholds_) {
    if (!out.empty()) out += ',';
    out += std::to_string(t.coupons) + ':' + std::to_string(t.copies);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_field_order(std::uint32_t q) {
  if (q < 2) throw DomainError("q must be >= 2");
}

// 1 - q^{-i}
double one_minus_qpow(double log_q, double i) { return -std::expm1(-i * log_q); }

}  // namespace

TheoryResult expected_Ni(std::uint32_t q, std::uint32_t h) {
  require_field_order(q);
  if (h < 1) throw DomainError("h must be >= 1");
  const double log_q = std::log(static_cast<double>(q));
  double sum = 0.0;
  for (std::uint32_t i = h; i >= 1; --i) sum += 1.0 / one_minus_qpow(log_q, i);
  return {sum, 4.0 * h * std::numeric_limits<double>::epsilon() * sum, Method::exact_sum};
}

double expected_Ni_upper_approx(std::uint32_t q, std::uint32_t h) {
  require_field_order(q);
  if (h < 1) throw DomainError("h must be >= 1");
  const double qd = static_cast<double>(q);
  const double log_q = std::log(qd);
  const double inv_q = 1.0 / qd;
  return h + inv_q / (1.0 - inv_q) +
         (std::log(one_minus_qpow(log_q, h)) - std::log(one_minus_qpow(log_q, 1))) / log_q;
}

double cdf_Ni(std::uint32_t q, std::uint32_t h, std::uint64_t s) {
  require_field_order(q);
  if (s < h) return 0.0;
  const double log_q = std::log(static_cast<double>(q));
  double log_p = 0.0;
  for (std::uint32_t k = 0; k < h; ++k) log_p += std::log1p(-std::exp(-(static_cast<double>(s) - k) * log_q));
  return std::exp(log_p);
}

double alpha(std::uint32_t q, std::uint32_t h) {
  require_field_order(q);
  const double log_q = std::log(static_cast<double>(q));
  double sum = 0.0;
  for (std::uint32_t i = h; i >= 1; --i) sum -= std::log1p(-std::exp(-static_cast<double>(i) * log_q));
  return sum;
}

double alpha_2_inf() {
  static const double value = [] {
    double sum = 0.0;
    for (int k = 1;; ++k) {
      const double increment = -std::log1p(-std::ldexp(1.0, -k));
      sum += increment;
      if (increment < 1e-15) break;
    }
    return sum;
  }();
  return value;
}

CcdfBound ccdf_Ni_bound(std::uint32_t q, std::uint32_t h, std::uint64_t s, const BoundConstants& constants) {
  require_field_order(q);
  if (s < h) throw DomainError("CCDF bound requires s >= h (s = " + std::to_string(s) +
                               ", h = " + std::to_string(h) + ")");
  const double qd = static_cast<double>(q);
  const double log_q = std::log(qd);
  const double excess = static_cast<double>(s - h);
  const double shrink = std::exp(-excess * log_q);  // q^{-(s-h)}

  // -ln Pr[N_i <= s]
  double neg_log_cdf = 0.0;
  for (std::uint32_t k = 0; k < h; ++k)
    neg_log_cdf -= std::log1p(-std::exp(-(static_cast<double>(s) - k) * log_q));

  const double a_qh = alpha(q, h);
  const double a_2inf = alpha_2_inf() * constants.alpha_2inf_scale;
  const double a_qh_used = a_qh * constants.alpha_qh_scale;
  const double exp_qh = a_qh_used * shrink;
  const double exp_2inf = a_2inf * shrink;

  // alpha_{q,h} q^{-(s-h)} + ln Pr[N_i <= s]
  //   = q^{-(s-h)} sum_{j>=2} (1/j) (1 - q^{-jh}) / (q^j - 1) (1 - q^{-(j-1)(s-h)}),
  // the j = 1 terms cancelling exactly.
  double series = 0.0;
  if (excess > 0.0) {
    for (int j = 2; j < 4000; ++j) {
      const double jd = j;
      const double term = (1.0 / jd) * one_minus_qpow(log_q, jd * h) / std::expm1(jd * log_q) *
                          one_minus_qpow(log_q, (jd - 1.0) * excess);
      series += term;
      if (term < 1e-18 * series) break;
    }
  }
  const double exponent_gap = (constants.alpha_qh_scale - 1.0) * a_qh * shrink + shrink * series;

  CcdfBound out{};
  out.exact = -std::expm1(-neg_log_cdf);
  out.bound_qh = -std::expm1(-exp_qh);
  out.bound_2inf = -std::expm1(-exp_2inf);
  out.gap_qh = std::exp(-neg_log_cdf) * -std::expm1(-exponent_gap);
  out.gap_2inf = std::exp(-exp_qh) * -std::expm1(-(a_2inf - a_qh_used) * shrink);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_tol(double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
}

TheoryResult scaled_quadrature(std::function<double(double)> integrand, std::uint32_t n,
                               std::uint32_t majorant_terms, double tol) {
  require_tol(tol);
  const double nd = n;
  IntegralTask task{std::move(integrand), {nd, majorant_terms}, tol / nd};
  const IntegralResult r = integrate(task);
  return {nd * r.value, nd * r.abs_error, Method::quadrature};
}

}  // namespace

TheoryResult expected_T(std::uint32_t n, std::uint32_t m, double tol) {
  if (n < 1 || m < 1) throw DomainError("expected_T needs n >= 1 and m >= 1");
  const double nd = n;
  auto integrand = [nd, m](double x) {
    const PoissonSplit p = poisson_split(m, x);
    // 1 - (1 - head)^n
    const double log_all = p.head < 0.5 ? std::log1p(-p.head) : std::log(p.tail);
    return -std::expm1(nd * log_all);
  };
  return scaled_quadrature(integrand, n, m, tol);
}

std::uint64_t chain_count(const ThresholdSpec& spec) {
  // ways[i] = number of partial chains ending with i_j = i.
  const std::uint32_t n = spec.coupons();
  std::vector<std::uint64_t> ways(n + 1, 0);
  ways[0] = 1;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (const auto& t : spec.thresholds()) {
    std::vector<std::uint64_t> next(n + 1, 0);
    std::uint64_t prefix = 0;
    for (std::uint32_t i = 0; i <= n; ++i) {
      prefix = ways[i] > kMax - prefix ? kMax : prefix + ways[i];
      if (i >= t.coupons) next[i] = prefix;
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = w > kMax - total ? kMax : total + w;
  return total;
}

namespace {

// Flattened chain expansion: per chain a log multinomial weight and the A+1 block sizes.
struct ChainTable {
  std::size_t blocks = 0;
  std::vector<double> log_weight;
  std::vector<std::uint32_t> sizes;
};

void enumerate_chains(const ThresholdSpec& spec, std::size_t level, std::uint32_t previous, double log_weight,
                      std::vector<std::uint32_t>& sizes, ChainTable& table) {
  const std::uint32_t n = spec.coupons();
  const std::size_t levels = spec.levels();
  if (level == levels) {
    // closing block j = A of size n - i_A
    sizes[levels] = n - previous;
    table.log_weight.push_back(log_weight + log_binomial(n, previous));
    table.sizes.insert(table.sizes.end(), sizes.begin(), sizes.end());
    return;
  }
  const std::uint32_t lower = std::max(previous, spec.thresholds()[level].coupons);
  for (std::uint32_t i = lower; i <= n; ++i) {
    sizes[level] = i - previous;
    enumerate_chains(spec, level + 1, i, log_weight + log_binomial(i, previous), sizes, table);
  }
}

}  // namespace

TheoryResult expected_general(const ThresholdSpec& spec, double tol, std::uint64_t chain_cap) {
  require_tol(tol);
  const std::uint64_t count = chain_count(spec);
  if (count > chain_cap)
    throw ResourceError("threshold spec " + spec.to_string() + " expands to " + std::to_string(count) +
                            " chains, above the cap of " + std::to_string(chain_cap),
                        count, chain_cap);

  auto table = std::make_shared<ChainTable>();
  table->blocks = spec.levels() + 1;
  table->log_weight.reserve(count);
  table->sizes.reserve(count * table->blocks);
  std::vector<std::uint32_t> sizes(table->blocks, 0);
  enumerate_chains(spec, 0, 0, 0.0, sizes, *table);

  std::vector<Multiplicity> bounds;
  for (std::size_t j = 0; j <= spec.levels() + 1; ++j) bounds.push_back(spec.copies(j));

  auto integrand = [table, bounds](double x) {
    // Block j holds coupons with count in [m_{j+1}, m_j).
    const std::size_t blocks = table->blocks;
    std::vector<double> log_band(blocks);
    for (std::size_t j = 0; j < blocks; ++j) {
      const double band = poisson_band(bounds[j + 1], bounds[j], x);
      log_band[j] = band > 0.0 ? std::log(band) : -std::numeric_limits<double>::infinity();
    }
    double covered = 0.0;
    const std::uint32_t* sz = table->sizes.data();
    for (std::size_t c = 0; c < table->log_weight.size(); ++c, sz += blocks) {
      double s = table->log_weight[c];
      for (std::size_t j = 0; j < blocks; ++j)
        if (sz[j] != 0) s += sz[j] * log_band[j];
      covered += std::exp(s);
    }
    return std::clamp(1.0 - covered, 0.0, 1.0);
  };
  return scaled_quadrature(integrand, spec.coupons(), spec.thresholds().front().copies, tol);
}

TheoryResult expected_k_of_n(std::uint32_t n, std::uint32_t k, std::uint32_t m, double tol) {
  if (n < 1 || k < 1 || k > n || m < 1) throw DomainError("expected_k_of_n needs 1 <= k <= n and m >= 1");
  std::vector<double> log_binom(k);
  for (std::uint32_t i = 0; i < k; ++i) log_binom[i] = log_binomial(n, i);
  auto integrand = [n, k, m, log_binom](double x) {
    const PoissonSplit p = poisson_split(m, x);
    const double log_head = p.head > 0.0 ? std::log(p.head) : -std::numeric_limits<double>::infinity();
    const double log_tail = p.tail > 0.0 ? std::log(p.tail) : -std::numeric_limits<double>::infinity();
    // sum_{i<k} C(n, i) head^{n-i} tail^i : fewer than k coupons reached m copies
    double sum = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
      double s = log_binom[i];
      if (n - i > 0) s += (n - i) * log_head;
      if (i > 0) s += i * log_tail;
      sum += std::exp(s);
    }
    return std::min(sum, 1.0);
  };
  return scaled_quadrature(integrand, n, m, tol);
}

double asymptotic_T(double n, double m) {
  if (!(n >= 2.0)) throw DomainError("asymptotic_T needs n >= 2");
  if (!(m >= 1.0)) throw DomainError("asymptotic_T needs m >= 1");
  const double ln_n = std::log(n);
  return n * ln_n + (m - 1.0) * n * std::log(ln_n) + (kEulerGamma - std::lgamma(m)) * n;
}

double large_m_T(double n, double m) { return n * m; }

double limit_cdf(double y, double m) {
  if (!(m >= 1.0)) throw DomainError("limit_cdf needs m >= 1");
  return std::exp(-std::exp(-y - std::lgamma(m)));
}

double failure_lower_bound(double n, double h, double t) {
  if (!(n >= 2.0)) throw DomainError("failure bound needs n >= 2");
  if (!(h >= 1.0)) throw DomainError("failure bound needs h >= 1");
  if (!(t >= 0.0)) throw DomainError("failure bound needs t >= 0");
  const double ln_n = std::log(n);
  const double log_rate = std::log(n) + (h - 1.0) * std::log(ln_n) - t / n - std::lgamma(h);
  return -std::expm1(-std::exp(log_rate));
}

}  // namespace gencoupon
