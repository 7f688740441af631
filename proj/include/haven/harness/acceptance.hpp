#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "haven/fed/aggregator.hpp"

namespace haven::harness {

struct AcceptanceOptions {
  /// Run only criteria whose name contains this substring (or whose number
  /// equals it).
  std::string filter;
  std::uint64_t seed = 42;
  /// Negative-control overrides.
  std::optional<double> theta2;
  std::optional<fed::AggregationRule> aggregation;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string bound;
  double seconds = 0.0;
  double limit_seconds = 0.0;
  /// Raw numbers for programmatic checks (e.g. negative controls).
  std::vector<std::pair<std::string, double>> values;

  double value(const std::string& key) const;
};

/// Names in criterion order.
std::vector<std::string> acceptance_criteria();

/// Runs the selected criteria; each result line is also written to `live`
/// as soon as it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream* live = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace haven::harness
