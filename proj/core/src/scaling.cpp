#include "grec/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "grec/metrics.hpp"
#include "grec/rng.hpp"
#include "grec/stats.hpp"

namespace grec {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Wall-clock for one evaluation call. Short calls are repeated until the
// timed block is long enough that scheduler hiccups and clock granularity
// average out; callers warm the code path up once before the first
// measurement.
template <typename Fn>
double time_call(Fn&& fn) {
  constexpr double kMinBlockMs = 100.0;
  auto start = Clock::now();
  fn();
  double once = elapsed_ms(start);
  if (once >= kMinBlockMs) return once;

  const int repeats = std::min(2000, static_cast<int>(kMinBlockMs / std::max(once, 1e-4)) + 1);
  start = Clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  return elapsed_ms(start) / repeats;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

ScalingReport run_scaling_bench(const ScalingBenchSpec& spec) {
  if (spec.sizes.empty()) throw Error(ErrorKind::empty_input, "no sizes to benchmark");
  for (std::size_t i = 1; i < spec.sizes.size(); ++i) {
    if (spec.sizes[i] <= spec.sizes[i - 1]) {
      throw Error(ErrorKind::invalid_argument, "sizes must be strictly increasing");
    }
  }
  if (spec.trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (spec.per_class < 2) throw Error(ErrorKind::invalid_argument, "per_class must be >= 2");
  if (spec.group_size == 0) throw Error(ErrorKind::invalid_argument, "group size must be >= 1");

  ScalingReport report;
  report.backend = spec.backend;
  report.k = spec.k;
  report.group_size = spec.group_size;
  report.trials = spec.trials;
  report.seed = spec.seed;
  report.points.reserve(spec.sizes.size());

  for (const std::uint32_t requested : spec.sizes) {
    const std::uint32_t classes =
        std::max(spec.group_size, requested / spec.per_class);

    SyntheticSpec synth_spec;
    synth_spec.num_classes = classes;
    synth_spec.samples_per_class = spec.per_class;
    synth_spec.dim = spec.dim;
    synth_spec.center_scale = spec.center_scale;
    synth_spec.cluster_std = spec.cluster_std;
    synth_spec.seed = derive_stream(spec.seed, kStreamTrial, requested);
    const EmbeddingSet dataset = generate(synth_spec);

    EvalConfig full_config;
    full_config.k = spec.k;
    full_config.backend = spec.backend;
    full_config.distance = spec.distance;
    full_config.seed = synth_spec.seed;
    full_config.max_threads = spec.max_threads;
    EvalConfig grouped_config = full_config;
    grouped_config.group_size = spec.group_size;

    ScalingPoint point;
    point.requested_size = requested;
    point.rows = static_cast<std::uint32_t>(dataset.rows());

    auto run_full = [&] { point.full_value = recall_at_k(dataset, full_config).value; };
    auto run_grouped = [&] {
      point.grouped_value = grouped_recall(dataset, grouped_config).value;
    };

    // One untimed warm-up per curve so first-touch page faults and lazily
    // started threads stay out of the measurements; trials interleave the
    // two curves so clock-speed drift lands on both fits alike.
    std::vector<double> full_times;
    std::vector<double> grouped_times;
    run_full();
    run_grouped();
    for (std::uint32_t t = 0; t < spec.trials; ++t) {
      full_times.push_back(time_call(run_full));
      grouped_times.push_back(time_call(run_grouped));
    }
    point.full_ms = median(std::move(full_times));
    point.grouped_ms = median(std::move(grouped_times));
    report.points.push_back(point);
  }

  if (report.points.size() >= 2) {
    std::vector<double> ns;
    std::vector<double> full_ms;
    std::vector<double> grouped_ms;
    for (const ScalingPoint& point : report.points) {
      ns.push_back(static_cast<double>(point.rows));
      full_ms.push_back(point.full_ms);
      grouped_ms.push_back(point.grouped_ms);
    }
    report.full_slope = log_log_slope(ns, full_ms);
    report.grouped_slope = log_log_slope(ns, grouped_ms);
  }
  return report;
}

}  // namespace grec
