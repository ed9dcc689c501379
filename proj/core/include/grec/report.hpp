#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grec {

struct Timing {
  double build_ms = 0.0;
  double query_ms = 0.0;
};

// Scalar metric plus the per-group breakdown behind it. `value` is always
// the arithmetic mean of `group_values`; variance and interval are present
// only with at least two groups.
struct MetricReport {
  std::string metric;                       // "recall" or "grouped_recall"
  std::uint32_t k = 1;
  std::optional<std::uint32_t> group_size;  // empty for single-group (plain) recall
  std::uint64_t seed = 0;
  double value = 0.0;
  std::vector<double> group_values;
  std::optional<double> sample_variance;
  double ci_alpha = 0.05;
  std::optional<double> ci_half_width;
  std::uint64_t skipped_queries = 0;
  std::vector<std::string> warnings;
  Timing timing;

  std::size_t group_count() const { return group_values.size(); }
};

// Train-minus-test difference of one metric evaluated on two splits.
struct GapReport {
  std::string metric;
  std::uint32_t k = 1;
  std::optional<std::uint32_t> group_size;
  double train_value = 0.0;
  double test_value = 0.0;
  double gap = 0.0;  // train_value - test_value, exactly
  std::optional<double> train_ci_half_width;
  std::optional<double> test_ci_half_width;
};

// Two-sample comparison of grouped reports from independent splits.
struct SplitComparison {
  std::string metric;
  std::uint32_t k = 1;
  std::optional<std::uint32_t> group_size;
  double alpha = 0.05;
  double value_a = 0.0;
  double value_b = 0.0;
  double difference = 0.0;  // |value_a - value_b|
  double bound = 0.0;       // z_{1-alpha/2} * sqrt(s_a^2/r_a + s_b^2/r_b)
  bool consistent = false;  // difference <= bound
};

}  // namespace grec
