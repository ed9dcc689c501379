#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grec/dataset.hpp"
#include "grec/knn.hpp"
#include "grec/partition.hpp"
#include "grec/report.hpp"

namespace grec {

enum class SingletonPolicy { skip, error };

struct EvalConfig {
  std::uint32_t k = 1;
  std::optional<std::uint32_t> group_size;  // empty = one group holding every label
  std::uint64_t seed = 0;
  double alpha = 0.05;
  RemainderPolicy remainder_policy = RemainderPolicy::drop;
  SingletonPolicy singleton_policy = SingletonPolicy::skip;
  Backend backend = Backend::vp_tree;
  Distance distance = Distance::squared_euclidean;
  std::uint32_t repeats = 1;   // repartition count for grouped evaluation
  std::size_t max_threads = 0; // 0 = GREC_THREADS / hardware default
};

// Leave-one-out Recall@K over the whole dataset: each row queries the rest,
// and scores 1 when any of its k nearest neighbors shares its label. Rows
// whose label has no second sample are skipped (and counted) or rejected per
// the singleton policy. k is clamped to n-1 with a warning. Single-group
// report: no variance, no interval.
MetricReport recall_at_k(const EmbeddingSet& dataset, const EvalConfig& config);

// Grouped Recall@K: partition the labels into groups of config.group_size,
// evaluate leave-one-out Recall@K inside each group's sub-dataset (neighbor
// search never leaves the group), and average the per-group values. Fills
// variance and the CLT interval when there are at least two groups.
MetricReport grouped_recall(const EmbeddingSet& dataset, const EvalConfig& config);

// One report per repartition; repeat i uses a seed derived from
// (config.seed, i). With config.repeats == 1 this is just {grouped_recall}.
std::vector<MetricReport> grouped_recall_repeated(const EmbeddingSet& dataset,
                                                  const EvalConfig& config);

// Dispatches on config.group_size: grouped when present, plain otherwise.
MetricReport evaluate(const EmbeddingSet& dataset, const EvalConfig& config);

// gap = train.value - test.value. Both reports must agree on metric, k, and
// group size; negative gaps are legal.
GapReport generalization_gap(const MetricReport& train, const MetricReport& test);

// Two-sample normal bound on |a.value - b.value| for independent splits.
// Requires >= 2 groups on both sides and matching configuration.
SplitComparison compare_splits(const MetricReport& a, const MetricReport& b, double alpha);

// Assembles a grouped-style report directly from per-group values, filling
// mean/variance/interval exactly as grouped_recall would. For tooling and
// tests that start from precomputed group results.
MetricReport report_from_group_values(std::vector<double> group_values, std::uint32_t k,
                                      std::optional<std::uint32_t> group_size, double alpha);

}  // namespace grec
