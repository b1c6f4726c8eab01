#pragma once

#include <string>
#include <vector>

#include "gencoupon/theory.hpp"

namespace gencoupon {

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // worst measured discrepancy (check specific)
  double limit = 0.0;      // allowed discrepancy
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;
  BoundConstants constants{};
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Cross-check battery: specialization chain, Markov-oracle agreement,
/// rank-distribution law, CCDF bound ordering.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace gencoupon
