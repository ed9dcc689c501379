#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grec/dataset.hpp"
#include "grec/metrics.hpp"

namespace grec {

// Desk-scale operating point: with the SyntheticSpec defaults below,
// leave-one-out recall@1 lands near 0.6 at 64 classes. Produced by
// calibrate_cluster_std and pinned here so runs are reproducible.
inline constexpr double kDefaultClusterStd = 0.53;

// Gaussian-cluster generator. Class centers are drawn uniformly in
// [-center_scale, center_scale]^dim from one RNG stream and per-sample
// isotropic noise from a second stream, so changing samples_per_class never
// moves the centers.
struct SyntheticSpec {
  std::uint32_t num_classes = 64;
  std::uint32_t samples_per_class = 8;
  std::uint32_t dim = 16;
  double center_scale = 1.0;
  double cluster_std = kDefaultClusterStd;
  std::uint64_t seed = 0;
};

// Deterministic given spec.seed: num_classes * samples_per_class rows of
// dimension dim, class-major, labels "0".."C-1".
EmbeddingSet generate(const SyntheticSpec& spec);

// The center matrix alone (num_classes x dim, row-major), for tests of the
// two-stream contract.
std::vector<double> class_centers(const SyntheticSpec& spec);

// Bisects cluster_std until the mean leave-one-out recall@1 over `trials`
// freshly seeded datasets is within `tolerance` of `target`. Deterministic
// given spec.seed.
double calibrate_cluster_std(const SyntheticSpec& spec, double target_recall,
                             std::uint32_t trials, double tolerance = 0.02);

struct SweepPoint {
  std::uint32_t num_classes = 0;
  std::vector<double> plain_trials;
  std::vector<double> grouped_trials;
  double plain_mean = 0.0;
  double plain_se = 0.0;  // standard error of the trial mean; 0 with one trial
  double grouped_mean = 0.0;
  double grouped_se = 0.0;
};

struct SweepReport {
  std::uint32_t k = 1;
  std::uint32_t group_size = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;
};

// For each class count and trial, generates a dataset and records plain
// recall@k next to grouped recall@k at the fixed group size. The plain curve
// is expected to fall with the class count while the grouped curve stays
// flat; this harness only measures, the claims live in the tests.
SweepReport sweep_class_count(const SyntheticSpec& base,
                              const std::vector<std::uint32_t>& class_counts,
                              std::uint32_t group_size, std::uint32_t k,
                              std::uint32_t trials);

struct CoverageReport {
  std::uint32_t k = 1;
  std::uint32_t group_size = 0;
  double alpha = 0.05;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  double coverage = 0.0;  // fraction of trials with difference <= bound
  std::vector<double> differences;
  std::vector<double> bounds;
  std::vector<std::uint8_t> within;
};

// Per trial: generate a dataset, split its labels uniformly at random into
// two halves, run grouped recall on each half, and check whether the observed
// difference lies inside the two-sample bound at 1-alpha. Requires an even
// class count with at least one group per half, and trials >= 100.
CoverageReport coverage_experiment(const SyntheticSpec& spec, std::uint32_t group_size,
                                   std::uint32_t k, double alpha, std::uint32_t trials);

struct CorrelationPoint {
  double cluster_std = 0.0;
  double plain_recall = 0.0;
  double grouped_recall = 0.0;
};

struct CorrelationReport {
  std::uint32_t k = 1;
  std::uint32_t group_size = 0;
  std::vector<CorrelationPoint> points;
  std::optional<double> pearson_r;  // empty when degenerate (zero variance)
};

// Evaluates plain and grouped recall per spec at a fixed class count and
// correlates the paired values. Requires >= 5 specs, all with the same
// number of classes.
CorrelationReport correlation_experiment(const std::vector<SyntheticSpec>& specs,
                                         std::uint32_t group_size, std::uint32_t k);

}  // namespace grec
