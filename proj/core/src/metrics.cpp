#include "grec/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "grec/parallel.hpp"
#include "grec/rng.hpp"
#include "grec/stats.hpp"

namespace grec {

namespace {

constexpr std::size_t kLowGroupCountThreshold = 30;

void check_common_config(const EvalConfig& config) {
  if (config.k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (config.repeats == 0) throw Error(ErrorKind::invalid_argument, "repeats must be >= 1");
}

struct RecallResult {
  double value = 0.0;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  bool k_clamped = false;
  Timing timing;
};

// Leave-one-out recall over one evaluation set. `max_threads` distributes
// queries; hit flags land in per-query slots so the tally is
// schedule-independent.
RecallResult recall_core(const EmbeddingSet& dataset, std::uint32_t k, Backend backend,
                         Distance distance, SingletonPolicy singleton_policy,
                         std::size_t max_threads) {
  if (dataset.rows() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "recall needs at least 2 rows, got " + std::to_string(dataset.rows()));
  }

  const auto& histogram = dataset.label_histogram();
  if (singleton_policy == SingletonPolicy::error) {
    for (std::uint32_t id = 0; id < histogram.size(); ++id) {
      if (histogram[id] == 1) {
        throw Error(ErrorKind::singleton_label,
                    "label '" + dataset.label_name(id) + "' has a single sample");
      }
    }
  }

  RecallResult result;
  const std::uint32_t gallery = static_cast<std::uint32_t>(dataset.rows() - 1);
  const std::uint32_t effective_k = std::min(k, gallery);
  result.k_clamped = effective_k != k;

  NeighborIndex index(dataset, backend, distance);
  result.timing.build_ms = index.build_ms();

  const std::size_t n = dataset.rows();
  std::vector<std::uint8_t> evaluated(n, 0);
  std::vector<std::uint8_t> hit(n, 0);

  const auto query_start = std::chrono::steady_clock::now();
  parallel_for(n, max_threads, [&](std::size_t i) {
    const std::uint32_t label = dataset.label_id(i);
    if (histogram[label] < 2) return;  // singleton: nothing to retrieve
    evaluated[i] = 1;
    for (const std::uint32_t neighbor :
         index.query(static_cast<std::uint32_t>(i), effective_k, /*exclude_self=*/true)) {
      if (dataset.label_id(neighbor) == label) {
        hit[i] = 1;
        break;
      }
    }
  });
  result.timing.query_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - query_start)
                               .count();

  for (std::size_t i = 0; i < n; ++i) {
    result.evaluated += evaluated[i];
    result.skipped += evaluated[i] ? 0 : 1;
  }
  if (result.evaluated == 0) {
    throw Error(ErrorKind::no_evaluable_queries,
                "no evaluable queries: every label has a single sample");
  }
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += hit[i];
  result.value = static_cast<double>(hits) / static_cast<double>(result.evaluated);
  return result;
}

void append_skip_warning(std::vector<std::string>& warnings, std::uint64_t skipped) {
  if (skipped > 0) {
    warnings.push_back("skipped_queries: " + std::to_string(skipped) +
                       " singleton-label queries skipped");
  }
}

// Mean / variance / interval shared by grouped_recall and the report seam.
void fill_group_statistics(MetricReport& report, double alpha) {
  report.ci_alpha = alpha;
  report.value = mean(report.group_values);
  if (report.group_values.size() >= 2) {
    report.sample_variance = sample_variance(report.group_values);
    report.ci_half_width = confidence_interval(report.group_values, alpha).half_width;
  }
}

}  // namespace

MetricReport recall_at_k(const EmbeddingSet& dataset, const EvalConfig& config) {
  check_common_config(config);
  const RecallResult core = recall_core(dataset, config.k, config.backend, config.distance,
                                        config.singleton_policy, config.max_threads);

  MetricReport report;
  report.metric = "recall";
  report.k = std::min(config.k, static_cast<std::uint32_t>(dataset.rows() - 1));
  report.seed = config.seed;
  report.ci_alpha = config.alpha;
  report.value = core.value;
  report.group_values = {core.value};
  report.skipped_queries = core.skipped;
  report.timing = core.timing;
  if (core.k_clamped) {
    report.warnings.push_back("k_clamped: k=" + std::to_string(config.k) +
                              " exceeds gallery size " + std::to_string(dataset.rows() - 1) +
                              "; clamped to " + std::to_string(report.k));
  }
  append_skip_warning(report.warnings, core.skipped);
  return report;
}

MetricReport grouped_recall(const EmbeddingSet& dataset, const EvalConfig& config) {
  check_common_config(config);
  if (!config.group_size) {
    throw Error(ErrorKind::invalid_argument, "grouped recall needs a group size");
  }

  const std::uint32_t label_count = static_cast<std::uint32_t>(dataset.label_count());
  const GroupPartition partition =
      build_partition(label_count, *config.group_size, config.seed, config.remainder_policy);
  const std::size_t group_count = partition.groups.size();

  // Row gather preserves dataset row order inside every group, so a single
  // group holding all labels reproduces plain recall bit for bit.
  std::vector<std::int32_t> group_of(label_count, -1);
  for (std::size_t g = 0; g < group_count; ++g) {
    for (const std::uint32_t label : partition.groups[g]) {
      group_of[label] = static_cast<std::int32_t>(g);
    }
  }
  std::vector<std::vector<std::uint32_t>> rows_per_group(group_count);
  for (std::size_t i = 0; i < dataset.rows(); ++i) {
    const std::int32_t g = group_of[dataset.label_id(i)];
    if (g >= 0) rows_per_group[static_cast<std::size_t>(g)].push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<RecallResult> results(group_count);
  std::vector<std::optional<Error>> errors(group_count);
  parallel_for(group_count, config.max_threads, [&](std::size_t g) {
    try {
      const EmbeddingSet sub = dataset.subset(rows_per_group[g]);
      results[g] = recall_core(sub, config.k, config.backend, config.distance,
                               config.singleton_policy, /*max_threads=*/1);
    } catch (const Error& e) {
      errors[g] = e;
    }
  });
  for (std::size_t g = 0; g < group_count; ++g) {
    if (errors[g]) {
      throw Error(errors[g]->kind(),
                  "group " + std::to_string(g) + ": " + errors[g]->what());
    }
  }

  MetricReport report;
  report.metric = "grouped_recall";
  report.k = config.k;
  report.group_size = config.group_size;
  report.seed = config.seed;
  report.group_values.reserve(group_count);
  std::size_t clamped_groups = 0;
  for (const RecallResult& r : results) {
    report.group_values.push_back(r.value);
    report.skipped_queries += r.skipped;
    report.timing.build_ms += r.timing.build_ms;
    report.timing.query_ms += r.timing.query_ms;
    clamped_groups += r.k_clamped ? 1 : 0;
  }
  fill_group_statistics(report, config.alpha);

  if (!partition.dropped_labels.empty()) {
    std::string names;
    const std::size_t shown = std::min<std::size_t>(partition.dropped_labels.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
      if (i > 0) names += ", ";
      names += dataset.label_name(partition.dropped_labels[i]);
    }
    if (partition.dropped_labels.size() > shown) names += ", ...";
    report.warnings.push_back("dropped_labels: " + std::to_string(partition.dropped_labels.size()) +
                              " label(s) left ungrouped by the remainder policy (" + names + ")");
  }
  if (clamped_groups > 0) {
    report.warnings.push_back("k_clamped: k=" + std::to_string(config.k) +
                              " exceeded the gallery in " + std::to_string(clamped_groups) +
                              " group(s); clamped per group");
  }
  append_skip_warning(report.warnings, report.skipped_queries);
  if (group_count < kLowGroupCountThreshold) {
    report.warnings.push_back("low_group_count: " + std::to_string(group_count) +
                              " group(s) < 30; the normal interval may be unreliable");
  }
  return report;
}

std::vector<MetricReport> grouped_recall_repeated(const EmbeddingSet& dataset,
                                                  const EvalConfig& config) {
  check_common_config(config);
  std::vector<MetricReport> reports;
  reports.reserve(config.repeats);
  for (std::uint32_t repeat = 0; repeat < config.repeats; ++repeat) {
    EvalConfig repeat_config = config;
    if (repeat > 0) repeat_config.seed = derive_stream(config.seed, kStreamRepeat, repeat);
    reports.push_back(grouped_recall(dataset, repeat_config));
  }
  return reports;
}

MetricReport evaluate(const EmbeddingSet& dataset, const EvalConfig& config) {
  return config.group_size ? grouped_recall(dataset, config) : recall_at_k(dataset, config);
}

namespace {

void check_matching_reports(const MetricReport& a, const MetricReport& b, const char* what) {
  if (a.metric != b.metric || a.k != b.k || a.group_size != b.group_size) {
    auto describe = [](const MetricReport& r) {
      return r.metric + "@" + std::to_string(r.k) +
             (r.group_size ? "/S=" + std::to_string(*r.group_size) : "");
    };
    throw Error(ErrorKind::config_mismatch, std::string(what) + " needs matching reports, got " +
                                                describe(a) + " vs " + describe(b));
  }
}

}  // namespace

GapReport generalization_gap(const MetricReport& train, const MetricReport& test) {
  check_matching_reports(train, test, "generalization gap");
  GapReport gap;
  gap.metric = train.metric;
  gap.k = train.k;
  gap.group_size = train.group_size;
  gap.train_value = train.value;
  gap.test_value = test.value;
  gap.gap = train.value - test.value;
  gap.train_ci_half_width = train.ci_half_width;
  gap.test_ci_half_width = test.ci_half_width;
  return gap;
}

SplitComparison compare_splits(const MetricReport& a, const MetricReport& b, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  check_matching_reports(a, b, "split comparison");
  if (a.group_count() < 2 || b.group_count() < 2) {
    throw Error(ErrorKind::insufficient_groups,
                "split comparison needs >= 2 groups per side, got " +
                    std::to_string(a.group_count()) + " and " + std::to_string(b.group_count()));
  }
  const double var_a =
      a.sample_variance ? *a.sample_variance : sample_variance(a.group_values);
  const double var_b =
      b.sample_variance ? *b.sample_variance : sample_variance(b.group_values);

  SplitComparison comparison;
  comparison.metric = a.metric;
  comparison.k = a.k;
  comparison.group_size = a.group_size;
  comparison.alpha = alpha;
  comparison.value_a = a.value;
  comparison.value_b = b.value;
  comparison.difference = std::fabs(a.value - b.value);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  comparison.bound = z * std::sqrt(var_a / static_cast<double>(a.group_count()) +
                                   var_b / static_cast<double>(b.group_count()));
  comparison.consistent = comparison.difference <= comparison.bound;
  return comparison;
}

MetricReport report_from_group_values(std::vector<double> group_values, std::uint32_t k,
                                      std::optional<std::uint32_t> group_size, double alpha) {
  if (group_values.empty()) {
    throw Error(ErrorKind::empty_input, "report needs at least one group value");
  }
  if (k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  for (const double v : group_values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::invalid_argument, "group values must lie in [0, 1]");
    }
  }
  MetricReport report;
  report.metric = group_size ? "grouped_recall" : "recall";
  report.k = k;
  report.group_size = group_size;
  report.group_values = std::move(group_values);
  fill_group_statistics(report, alpha);
  return report;
}

}  // namespace grec
