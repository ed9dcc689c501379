#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grec/knn.hpp"
#include "grec/synth.hpp"

namespace grec {

// Wall-clock scaling harness: times full-dataset recall against grouped
// recall at a fixed group size over growing synthetic datasets. With the
// group size fixed, per-group cost is constant and the group count grows
// linearly in n, so grouped evaluation should fit a log-log slope near 1
// while full brute-force evaluation sits near 2.
struct ScalingBenchSpec {
  std::vector<std::uint32_t> sizes;  // requested row counts, strictly increasing
  std::uint32_t group_size = 4;
  std::uint32_t k = 1;
  std::uint32_t per_class = 8;
  std::uint32_t dim = 16;
  double cluster_std = kDefaultClusterStd;
  double center_scale = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t trials = 3;  // median over this many timed runs
  Backend backend = Backend::brute_force;
  Distance distance = Distance::squared_euclidean;
  std::size_t max_threads = 0;
};

struct ScalingPoint {
  std::uint32_t requested_size = 0;
  std::uint32_t rows = 0;  // rounded to a whole number of classes
  double full_ms = 0.0;    // median wall-clock for full-dataset recall
  double grouped_ms = 0.0; // median wall-clock for grouped recall
  double full_value = 0.0;
  double grouped_value = 0.0;
};

struct ScalingReport {
  Backend backend = Backend::brute_force;
  std::uint32_t k = 1;
  std::uint32_t group_size = 4;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<ScalingPoint> points;
  std::optional<double> full_slope;     // log-log fits; empty with < 2 sizes
  std::optional<double> grouped_slope;
};

// Throws when sizes are empty or not strictly increasing. Timings vary run
// to run; the evaluated metric values are deterministic given the seed.
ScalingReport run_scaling_bench(const ScalingBenchSpec& spec);

}  // namespace grec
