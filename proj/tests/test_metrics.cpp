#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "grec/metrics.hpp"
#include "grec/rng.hpp"
#include "grec/synth.hpp"
#include "test_support.hpp"

using grec::Backend;
using grec::Error;
using grec::ErrorKind;
using grec::EvalConfig;
using grec::MetricReport;

namespace {

EvalConfig config_with(std::uint32_t k, std::optional<std::uint32_t> group_size = {},
                       std::uint64_t seed = 0) {
  EvalConfig config;
  config.k = k;
  config.group_size = group_size;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("recall: clustered 1-D pairs score 1.0") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 10.0, 11.0}, {"A", "A", "B", "B"});
  const MetricReport report = grec::recall_at_k(set, config_with(1));
  CHECK(report.value == 1.0);
  CHECK(report.metric == "recall");
  CHECK(report.group_count() == 1);
  CHECK(!report.sample_variance.has_value());
  CHECK(!report.ci_half_width.has_value());
  CHECK(report.skipped_queries == 0);
}

TEST_CASE("recall: interleaved labels score 0.0 at k=1 and 1.0 at k=3") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 2.5, 3.0}, {"A", "B", "A", "B"});
  CHECK(grec::recall_at_k(set, config_with(1)).value == 0.0);
  CHECK(grec::recall_at_k(set, config_with(3)).value == 1.0);
}

TEST_CASE("recall: k larger than the gallery clamps with a warning") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 2.5, 3.0}, {"A", "B", "A", "B"});
  const MetricReport report = grec::recall_at_k(set, config_with(10));
  CHECK(report.k == 3);
  CHECK(report.value == 1.0);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("k_clamped") == 0);
}

TEST_CASE("recall: all labels singleton") {
  const auto set = grec_test::make_set_1d({0.0, 5.0, 10.0}, {"A", "B", "C"});
  SUBCASE("skip policy has nothing left to evaluate") {
    try {
      grec::recall_at_k(set, config_with(1));
      FAIL("expected no-evaluable-queries");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::no_evaluable_queries);
    }
  }
  SUBCASE("error policy rejects on the first singleton") {
    EvalConfig config = config_with(1);
    config.singleton_policy = grec::SingletonPolicy::error;
    try {
      grec::recall_at_k(set, config);
      FAIL("expected singleton error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::singleton_label);
    }
  }
}

TEST_CASE("recall: singletons are skipped and counted, not scored as misses") {
  const auto set =
      grec_test::make_set_1d({0.0, 1.0, 10.0, 11.0, 50.0}, {"A", "A", "B", "B", "lone"});
  const MetricReport report = grec::recall_at_k(set, config_with(1));
  CHECK(report.value == 1.0);  // the lone row does not drag the metric down
  CHECK(report.skipped_queries == 1);
  REQUIRE(!report.warnings.empty());
  CHECK(report.warnings.back().find("skipped_queries: 1") != std::string::npos);
}

TEST_CASE("recall requires at least two rows") {
  const auto set = grec_test::make_set_1d({1.0}, {"A"});
  CHECK_THROWS_AS(grec::recall_at_k(set, config_with(1)), Error);
}

TEST_CASE("grouped: single group equals plain recall exactly") {
  grec::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = grec_test::random_set(rng);
    const auto group_size = static_cast<std::uint32_t>(set.label_count());
    const MetricReport plain = grec::recall_at_k(set, config_with(2));
    const MetricReport grouped = grec::grouped_recall(set, config_with(2, group_size));
    CHECK(grouped.value == plain.value);  // bit-for-bit
    CHECK(grouped.group_count() == 1);
    CHECK(grouped.skipped_queries == plain.skipped_queries);
  }
}

TEST_CASE("grouped: two hand-built groups average to 0.5") {
  // Labels A,B form a clustered block (recall 1), C,D an interleaved block
  // (recall 0). Find a seed that partitions {A,B | C,D} so the example is
  // driven through the real partition path.
  const auto set = grec_test::make_set_1d({0.0, 1.0, 10.0, 11.0, 100.0, 101.0, 102.5, 103.0},
                                          {"A", "A", "B", "B", "C", "D", "C", "D"});
  std::optional<std::uint64_t> seed;
  for (std::uint64_t candidate = 0; candidate < 200 && !seed; ++candidate) {
    const auto partition = grec::build_partition(4, 2, candidate, grec::RemainderPolicy::drop);
    const std::vector<std::uint32_t> ab = {0, 1};
    if (partition.groups[0] == ab || partition.groups[1] == ab) seed = candidate;
  }
  REQUIRE(seed.has_value());

  const MetricReport report = grec::grouped_recall(set, config_with(1, 2, *seed));
  CHECK(report.value == 0.5);
  REQUIRE(report.group_count() == 2);
  std::vector<double> sorted = report.group_values;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<double>{0.0, 1.0});
  CHECK(*report.sample_variance == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("grouped: injected group values average and bound correctly") {
  const MetricReport report =
      grec::report_from_group_values({0.8, 0.6, 1.0, 0.6}, 1, 4, 0.05);
  CHECK(report.value == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(*report.ci_half_width == doctest::Approx(0.18766).epsilon(1e-4));
  CHECK(*report.sample_variance == doctest::Approx(0.11 / 3.0).epsilon(1e-12));
}

TEST_CASE("grouped: dropped labels are reported") {
  const auto set = grec_test::make_set_1d({0.0, 0.5, 10.0, 10.5, 20.0, 20.5},
                                          {"A", "A", "B", "B", "C", "C"});
  const MetricReport report = grec::grouped_recall(set, config_with(1, 2, 3));
  CHECK(report.group_count() == 1);
  REQUIRE(!report.warnings.empty());
  CHECK(report.warnings[0].find("dropped_labels: 1") != std::string::npos);
}

TEST_CASE("grouped: per-group errors carry the group index") {
  // One label of the pair is singleton; under the error policy the failing
  // group is named.
  const auto set =
      grec_test::make_set_1d({0.0, 1.0, 5.0}, {"A", "A", "B"});
  EvalConfig config = config_with(1, 2);
  config.singleton_policy = grec::SingletonPolicy::error;
  try {
    grec::grouped_recall(set, config);
    FAIL("expected singleton error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singleton_label);
    CHECK(std::string(e.what()).find("group 0") != std::string::npos);
  }
}

TEST_CASE("grouped: group size above the label count rejects") {
  const auto set = grec_test::make_set_1d({0.0, 1.0}, {"A", "A"});
  CHECK_THROWS_AS(grec::grouped_recall(set, config_with(1, 5)), Error);
}

TEST_CASE("repeated repartitions differ by seed derivation but stay deterministic") {
  grec::Rng rng(123);
  grec_test::RandomSetOptions options;
  options.min_rows = 24;
  options.max_rows = 48;
  options.max_labels = 8;
  auto set = grec_test::random_set(rng, options);
  while (set.label_count() < 4) set = grec_test::random_set(rng, options);
  EvalConfig config = config_with(1, 2, 9);
  config.repeats = 3;
  const auto reports_a = grec::grouped_recall_repeated(set, config);
  const auto reports_b = grec::grouped_recall_repeated(set, config);
  REQUIRE(reports_a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(reports_a[i].value == reports_b[i].value);
    CHECK(reports_a[i].seed == reports_b[i].seed);
  }
  CHECK(reports_a[0].seed != reports_a[1].seed);
}

TEST_CASE("recall values stay in [0,1] and are monotone in k (property)") {
  grec::Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    grec_test::RandomSetOptions options;
    options.min_rows = 4;
    options.max_rows = 40;
    options.lattice = trial % 4 == 0;
    const auto set = grec_test::random_set(rng, options);
    double previous = -1.0;
    for (std::uint32_t k = 1; k < set.rows(); k += 1 + k / 2) {
      double value;
      try {
        value = grec::recall_at_k(set, config_with(k)).value;
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_evaluable_queries);
        break;
      }
      CHECK(value >= 0.0);
      CHECK(value <= 1.0);
      CHECK(value >= previous);
      previous = value;
    }
  }
}

TEST_CASE("report value equals the mean of group values to 1e-12 relative (property)") {
  grec::Rng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 2 + rng.below(40);
    std::vector<double> values;
    for (std::size_t i = 0; i < r; ++i) values.push_back(rng.next_double());
    const MetricReport report =
        grec::report_from_group_values(values, 1, static_cast<std::uint32_t>(r), 0.05);
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double expected = sum / static_cast<double>(r);
    CHECK(std::fabs(report.value - expected) <= 1e-12 * std::max(1.0, std::fabs(expected)));
  }
}

TEST_CASE("bijective label renaming leaves grouped values untouched") {
  grec::Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    grec_test::RandomSetOptions options;
    options.min_rows = 16;
    options.max_rows = 64;
    const auto set = grec_test::random_set(rng, options);

    std::vector<std::string> renamed;
    renamed.reserve(set.rows());
    for (std::size_t i = 0; i < set.rows(); ++i) {
      renamed.push_back("renamed/" + set.label_name(set.label_id(i)) + "!");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < set.rows(); ++i) {
      rows.emplace_back(set.row(i).begin(), set.row(i).end());
    }
    const auto renamed_set = grec::EmbeddingSet::validate(rows, renamed);

    const auto group_size = static_cast<std::uint32_t>(1 + rng.below(set.label_count()));
    const std::uint64_t seed = rng.next_u64();
    MetricReport a, b;
    try {
      a = grec::grouped_recall(set, config_with(1, group_size, seed));
      b = grec::grouped_recall(renamed_set, config_with(1, group_size, seed));
    } catch (const Error&) {
      continue;  // e.g. a group of singletons; both sides fail identically
    }
    CHECK(a.value == b.value);
    CHECK(a.group_values == b.group_values);
  }
}

TEST_CASE("quadrupling the group count roughly halves the interval width") {
  grec::SyntheticSpec spec;
  spec.samples_per_class = 4;
  spec.dim = 8;
  const std::uint32_t group_size = 4;
  double sum_small = 0.0;
  double sum_large = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    spec.seed = 1000 + t;
    spec.num_classes = 32;  // 8 groups
    const auto small_set = grec::generate(spec);
    sum_small += *grec::grouped_recall(small_set, config_with(1, group_size, spec.seed))
                      .ci_half_width;
    spec.num_classes = 128;  // 32 groups
    const auto large_set = grec::generate(spec);
    sum_large += *grec::grouped_recall(large_set, config_with(1, group_size, spec.seed))
                      .ci_half_width;
  }
  const double ratio = (sum_large / trials) / (sum_small / trials);
  CHECK(ratio > 0.5 * 0.85);
  CHECK(ratio < 0.5 * 1.15);
}

TEST_CASE("generalization gap: exact differences, negative gaps included") {
  const MetricReport train = grec::report_from_group_values({0.685}, 1, std::nullopt, 0.05);
  const MetricReport test = grec::report_from_group_values({0.660}, 1, std::nullopt, 0.05);
  const grec::GapReport gap = grec::generalization_gap(train, test);
  CHECK(gap.gap == train.value - test.value);
  CHECK(gap.gap == doctest::Approx(0.025).epsilon(1e-12));

  const MetricReport low_train = grec::report_from_group_values({0.442}, 1, std::nullopt, 0.05);
  const MetricReport low_test = grec::report_from_group_values({0.480}, 1, std::nullopt, 0.05);
  const grec::GapReport negative = grec::generalization_gap(low_train, low_test);
  CHECK(negative.gap == doctest::Approx(-0.038).epsilon(1e-12));
  CHECK(negative.gap < 0.0);

  const grec::GapReport zero = grec::generalization_gap(train, train);
  CHECK(zero.gap == 0.0);
}

TEST_CASE("generalization gap rejects mismatched configurations") {
  const MetricReport a = grec::report_from_group_values({0.5, 0.6}, 1, 4, 0.05);
  const MetricReport b = grec::report_from_group_values({0.5, 0.6}, 2, 4, 0.05);
  const MetricReport c = grec::report_from_group_values({0.5, 0.6}, 1, 8, 0.05);
  CHECK_THROWS_AS(grec::generalization_gap(a, b), Error);
  CHECK_THROWS_AS(grec::generalization_gap(a, c), Error);
  CHECK_NOTHROW(grec::generalization_gap(a, a));
}

TEST_CASE("compare_splits: worked example") {
  const MetricReport a = grec::report_from_group_values({1.0, 0.8}, 1, 2, 0.05);
  const MetricReport b = grec::report_from_group_values({0.6, 0.8}, 1, 2, 0.05);
  const grec::SplitComparison comparison = grec::compare_splits(a, b, 0.05);
  CHECK(comparison.difference == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(comparison.bound == doctest::Approx(0.27718).epsilon(1e-4));
  CHECK(comparison.consistent);
}

TEST_CASE("compare_splits: identical reports are trivially consistent") {
  const MetricReport a = grec::report_from_group_values({0.4, 0.9, 0.7}, 1, 3, 0.05);
  const grec::SplitComparison comparison = grec::compare_splits(a, a, 0.05);
  CHECK(comparison.difference == 0.0);
  CHECK(comparison.consistent);
}

TEST_CASE("compare_splits: zero variance with maximal separation is inconsistent") {
  const MetricReport a = grec::report_from_group_values({1.0, 1.0, 1.0}, 1, 3, 0.05);
  const MetricReport b = grec::report_from_group_values({0.0, 0.0, 0.0}, 1, 3, 0.05);
  const grec::SplitComparison comparison = grec::compare_splits(a, b, 0.05);
  CHECK(comparison.difference == 1.0);
  CHECK(comparison.bound == 0.0);
  CHECK(!comparison.consistent);
}

TEST_CASE("compare_splits: the bound shrinks as group counts grow (property)") {
  grec::Rng rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 2 + rng.below(20);
    std::vector<double> values;
    for (std::size_t i = 0; i < r; ++i) values.push_back(rng.next_double());
    std::vector<double> doubled = values;
    doubled.insert(doubled.end(), values.begin(), values.end());

    const MetricReport small_a = grec::report_from_group_values(values, 1, 2, 0.05);
    const MetricReport big_a = grec::report_from_group_values(doubled, 1, 2, 0.05);
    const auto small_bound = grec::compare_splits(small_a, small_a, 0.05).bound;
    const auto big_bound = grec::compare_splits(big_a, big_a, 0.05).bound;
    CHECK(big_bound <= small_bound);
    CHECK(big_bound >= 0.0);
  }
}

TEST_CASE("compare_splits needs two groups per side") {
  const MetricReport single = grec::report_from_group_values({0.5}, 1, 2, 0.05);
  const MetricReport pair = grec::report_from_group_values({0.5, 0.7}, 1, 2, 0.05);
  CHECK_THROWS_AS(grec::compare_splits(single, pair, 0.05), Error);
  CHECK_THROWS_AS(grec::compare_splits(pair, pair, 1.5), Error);
}
