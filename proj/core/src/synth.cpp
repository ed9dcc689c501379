#include "grec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "grec/rng.hpp"
#include "grec/stats.hpp"

namespace grec {

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.num_classes == 0) throw Error(ErrorKind::invalid_argument, "num_classes must be >= 1");
  if (spec.samples_per_class < 2) {
    throw Error(ErrorKind::invalid_argument, "samples_per_class must be >= 2");
  }
  if (spec.dim == 0) throw Error(ErrorKind::invalid_argument, "dim must be >= 1");
  if (!(spec.center_scale > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "center_scale must be > 0");
  }
  if (!(spec.cluster_std >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "cluster_std must be >= 0");
  }
}

double trial_mean(const std::vector<double>& values) {
  return mean(std::span<const double>(values.data(), values.size()));
}

// Standard error of the trial mean; zero for a single trial.
double trial_se(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double variance = sample_variance(std::span<const double>(values.data(), values.size()));
  return std::sqrt(variance / static_cast<double>(values.size()));
}

}  // namespace

std::vector<double> class_centers(const SyntheticSpec& spec) {
  check_spec(spec);
  Rng centers_rng(derive_stream(spec.seed, kStreamCenters));
  std::vector<double> centers(std::size_t{spec.num_classes} * spec.dim);
  for (double& value : centers) {
    value = centers_rng.uniform(-spec.center_scale, spec.center_scale);
  }
  return centers;
}

EmbeddingSet generate(const SyntheticSpec& spec) {
  check_spec(spec);
  const std::vector<double> centers = class_centers(spec);
  Rng noise_rng(derive_stream(spec.seed, kStreamNoise));

  const std::size_t n = std::size_t{spec.num_classes} * spec.samples_per_class;
  std::vector<float> values(n * spec.dim);
  std::vector<std::string> labels(n);
  std::size_t row = 0;
  for (std::uint32_t c = 0; c < spec.num_classes; ++c) {
    const double* center = centers.data() + std::size_t{c} * spec.dim;
    for (std::uint32_t s = 0; s < spec.samples_per_class; ++s, ++row) {
      float* out = values.data() + row * spec.dim;
      for (std::uint32_t d = 0; d < spec.dim; ++d) {
        out[d] = static_cast<float>(center[d] + spec.cluster_std * noise_rng.normal());
      }
      labels[row] = std::to_string(c);
    }
  }
  return EmbeddingSet::validate_packed(std::move(values), spec.dim, labels);
}

double calibrate_cluster_std(const SyntheticSpec& spec, double target_recall,
                             std::uint32_t trials, double tolerance) {
  check_spec(spec);
  if (!(target_recall > 0.0 && target_recall < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "target recall must lie in (0, 1)");
  }
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");

  // Recall falls monotonically in the noise level (up to trial noise), so a
  // doubling search brackets the target and bisection closes in. Probe seeds
  // are fixed across probes to keep the probed curve monotone.
  auto probe = [&](double cluster_std) {
    double sum = 0.0;
    for (std::uint32_t t = 0; t < trials; ++t) {
      SyntheticSpec probe_spec = spec;
      probe_spec.cluster_std = cluster_std;
      probe_spec.seed = derive_stream(spec.seed, kStreamCalibrate, t);
      EvalConfig config;
      config.k = 1;
      config.backend = Backend::vp_tree;
      sum += recall_at_k(generate(probe_spec), config).value;
    }
    return sum / trials;
  };

  double lo = 0.0;  // recall ~1 with distinct centers
  double hi = std::max(spec.cluster_std, spec.center_scale * 0.25);
  for (int i = 0; i < 60 && probe(hi) > target_recall; ++i) hi *= 2.0;

  double mid = hi;
  for (int i = 0; i < 40; ++i) {
    mid = 0.5 * (lo + hi);
    const double recall = probe(mid);
    if (std::fabs(recall - target_recall) <= tolerance) return mid;
    if (recall > target_recall) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

SweepReport sweep_class_count(const SyntheticSpec& base,
                              const std::vector<std::uint32_t>& class_counts,
                              std::uint32_t group_size, std::uint32_t k,
                              std::uint32_t trials) {
  check_spec(base);
  if (class_counts.empty()) throw Error(ErrorKind::empty_input, "no class counts to sweep");
  if (group_size == 0) throw Error(ErrorKind::invalid_argument, "group size must be >= 1");
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  for (const std::uint32_t count : class_counts) {
    if (count < group_size) {
      throw Error(ErrorKind::invalid_argument,
                  "class count " + std::to_string(count) + " is below group size " +
                      std::to_string(group_size));
    }
  }

  SweepReport report;
  report.k = k;
  report.group_size = group_size;
  report.trials = trials;
  report.seed = base.seed;
  report.points.reserve(class_counts.size());

  for (const std::uint32_t count : class_counts) {
    SweepPoint point;
    point.num_classes = count;
    point.plain_trials.reserve(trials);
    point.grouped_trials.reserve(trials);
    for (std::uint32_t t = 0; t < trials; ++t) {
      SyntheticSpec trial_spec = base;
      trial_spec.num_classes = count;
      trial_spec.seed = derive_stream(base.seed, kStreamTrial, count, t);
      const EmbeddingSet dataset = generate(trial_spec);

      EvalConfig config;
      config.k = k;
      config.seed = trial_spec.seed;
      config.backend = Backend::vp_tree;
      point.plain_trials.push_back(recall_at_k(dataset, config).value);
      config.group_size = group_size;
      point.grouped_trials.push_back(grouped_recall(dataset, config).value);
    }
    point.plain_mean = trial_mean(point.plain_trials);
    point.plain_se = trial_se(point.plain_trials);
    point.grouped_mean = trial_mean(point.grouped_trials);
    point.grouped_se = trial_se(point.grouped_trials);
    report.points.push_back(std::move(point));
  }
  return report;
}

CoverageReport coverage_experiment(const SyntheticSpec& spec, std::uint32_t group_size,
                                   std::uint32_t k, double alpha, std::uint32_t trials) {
  check_spec(spec);
  if (group_size == 0) throw Error(ErrorKind::invalid_argument, "group size must be >= 1");
  if (spec.num_classes % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, "coverage needs an even class count");
  }
  if (spec.num_classes / 2 < group_size) {
    throw Error(ErrorKind::invalid_argument, "each half needs at least one group of labels");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (trials < 100) throw Error(ErrorKind::invalid_argument, "coverage needs >= 100 trials");

  CoverageReport report;
  report.k = k;
  report.group_size = group_size;
  report.alpha = alpha;
  report.trials = trials;
  report.seed = spec.seed;
  report.differences.reserve(trials);
  report.bounds.reserve(trials);
  report.within.reserve(trials);

  std::uint64_t covered = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    SyntheticSpec trial_spec = spec;
    trial_spec.seed = derive_stream(spec.seed, kStreamTrial, t);
    const EmbeddingSet dataset = generate(trial_spec);

    // Uniform split of the label ids into two halves.
    std::vector<std::uint32_t> labels(dataset.label_count());
    std::iota(labels.begin(), labels.end(), 0u);
    Rng split_rng(derive_stream(trial_spec.seed, kStreamSplit));
    shuffle(labels, split_rng);
    const std::size_t half = labels.size() / 2;

    std::vector<std::uint8_t> in_first(dataset.label_count(), 0);
    for (std::size_t i = 0; i < half; ++i) in_first[labels[i]] = 1;
    std::vector<std::uint32_t> rows_a;
    std::vector<std::uint32_t> rows_b;
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
      (in_first[dataset.label_id(i)] ? rows_a : rows_b).push_back(static_cast<std::uint32_t>(i));
    }

    EvalConfig config;
    config.k = k;
    config.group_size = group_size;
    config.alpha = alpha;
    config.backend = Backend::vp_tree;
    config.seed = derive_stream(trial_spec.seed, kStreamPartition, 0);
    const MetricReport report_a = grouped_recall(dataset.subset(rows_a), config);
    config.seed = derive_stream(trial_spec.seed, kStreamPartition, 1);
    const MetricReport report_b = grouped_recall(dataset.subset(rows_b), config);

    const SplitComparison comparison = compare_splits(report_a, report_b, alpha);
    report.differences.push_back(comparison.difference);
    report.bounds.push_back(comparison.bound);
    report.within.push_back(comparison.consistent ? 1 : 0);
    covered += comparison.consistent ? 1 : 0;
  }
  report.coverage = static_cast<double>(covered) / static_cast<double>(trials);
  return report;
}

CorrelationReport correlation_experiment(const std::vector<SyntheticSpec>& specs,
                                         std::uint32_t group_size, std::uint32_t k) {
  if (specs.size() < 5) {
    throw Error(ErrorKind::invalid_argument,
                "correlation needs >= 5 specs, got " + std::to_string(specs.size()));
  }
  if (group_size == 0) throw Error(ErrorKind::invalid_argument, "group size must be >= 1");
  for (const SyntheticSpec& spec : specs) {
    check_spec(spec);
    if (spec.num_classes != specs.front().num_classes) {
      throw Error(ErrorKind::invalid_argument,
                  "correlation runs at a fixed class count; specs disagree");
    }
    if (spec.num_classes < group_size) {
      throw Error(ErrorKind::invalid_argument, "class count below group size");
    }
  }

  CorrelationReport report;
  report.k = k;
  report.group_size = group_size;
  report.points.reserve(specs.size());

  std::vector<double> plain;
  std::vector<double> grouped;
  for (const SyntheticSpec& spec : specs) {
    const EmbeddingSet dataset = generate(spec);
    EvalConfig config;
    config.k = k;
    config.seed = spec.seed;
    config.backend = Backend::vp_tree;
    CorrelationPoint point;
    point.cluster_std = spec.cluster_std;
    point.plain_recall = recall_at_k(dataset, config).value;
    config.group_size = group_size;
    point.grouped_recall = grouped_recall(dataset, config).value;
    plain.push_back(point.plain_recall);
    grouped.push_back(point.grouped_recall);
    report.points.push_back(point);
  }
  report.pearson_r = pearson_correlation(plain, grouped);
  return report;
}

}  // namespace grec
