#include <doctest.h>

#include <cmath>
#include <vector>

#include "grec/error.hpp"
#include "grec/rng.hpp"
#include "grec/stats.hpp"

using grec::confidence_interval;
using grec::Error;
using grec::normal_quantile;

namespace {

// Independent quantile oracle: bisection against the normal CDF expressed
// through std::erfc. Slow but has no code in common with the rational
// approximation it checks.
double quantile_by_bisection(double p) {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("normal quantile matches the erfc bisection oracle") {
  for (const double p : {1e-9, 1e-6, 0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999, 1 - 1e-6}) {
    CHECK(normal_quantile(p) == doctest::Approx(quantile_by_bisection(p)).epsilon(1e-9));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("normal quantile is antisymmetric and rejects bad p") {
  grec::Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const double p = rng.uniform(1e-6, 1.0 - 1e-6);
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
  CHECK_THROWS_AS(normal_quantile(-0.5), Error);
}

TEST_CASE("confidence interval: worked example") {
  // s^2 = 0.11/3, half width = z * sqrt(s^2/4) = 1.959964 * 0.0957427 = 0.18766
  const std::vector<double> values = {0.8, 0.6, 1.0, 0.6};
  const auto [m, half] = confidence_interval(values, 0.05);
  CHECK(m == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(half == doctest::Approx(0.18766).epsilon(1e-4));
}

TEST_CASE("confidence interval: two maximally spread values") {
  const std::vector<double> values = {0.0, 1.0};
  const auto [m, half] = confidence_interval(values, 0.05);
  CHECK(m == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half == doctest::Approx(0.97998).epsilon(1e-4));
}

TEST_CASE("zero variance gives exactly zero width at any alpha") {
  for (const double alpha : {0.5, 0.05, 0.001}) {
    const std::vector<double> values = {0.7, 0.7, 0.7, 0.7, 0.7};
    CHECK(confidence_interval(values, alpha).half_width == 0.0);
  }
}

TEST_CASE("interval unavailable below two values, bad alpha rejected") {
  const std::vector<double> one = {0.3};
  CHECK_THROWS_AS(confidence_interval(one, 0.05), Error);
  const std::vector<double> two = {0.3, 0.4};
  CHECK_THROWS_AS(confidence_interval(two, 0.0), Error);
  CHECK_THROWS_AS(confidence_interval(two, 1.0), Error);
}

TEST_CASE("interval width shrinks in r and in 1-alpha") {
  grec::Rng rng(7);
  std::vector<double> values;
  for (int i = 0; i < 10; ++i) values.push_back(rng.next_double());
  const double narrow = confidence_interval(values, 0.10).half_width;
  const double wide = confidence_interval(values, 0.01).half_width;
  CHECK(narrow < wide);

  // Same empirical variance replicated 4x should roughly halve the width.
  std::vector<double> packed = values;
  for (int copy = 0; copy < 3; ++copy) packed.insert(packed.end(), values.begin(), values.end());
  const double base = confidence_interval(values, 0.05).half_width;
  const double quadrupled = confidence_interval(packed, 0.05).half_width;
  CHECK(quadrupled == doctest::Approx(base / 2.0).epsilon(0.05));
}

TEST_CASE("pearson correlation basics") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> up = {2.0, 4.0, 6.0, 8.0};
  const std::vector<double> down = {8.0, 6.0, 4.0, 2.0};
  CHECK(*grec::pearson_correlation(xs, up) == doctest::Approx(1.0));
  CHECK(*grec::pearson_correlation(xs, down) == doctest::Approx(-1.0));
  const std::vector<double> flat = {3.0, 3.0, 3.0, 3.0};
  CHECK(!grec::pearson_correlation(xs, flat).has_value());
}

TEST_CASE("log-log slope recovers exact power laws") {
  const std::vector<double> xs = {100.0, 200.0, 400.0, 800.0};
  std::vector<double> quadratic, linear;
  for (const double x : xs) {
    quadratic.push_back(3.0 * x * x);
    linear.push_back(0.25 * x);
  }
  CHECK(grec::log_log_slope(xs, quadratic) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(grec::log_log_slope(xs, linear) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(grec::log_log_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
}
