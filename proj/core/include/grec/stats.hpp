#pragma once

#include <optional>
#include <span>

namespace grec {

double mean(std::span<const double> values);

// Bessel-corrected sample variance; requires at least 2 values.
double sample_variance(std::span<const double> values);

// Standard normal quantile (inverse CDF) on (0, 1), by the Wichura
// rational approximation; absolute error is well below 1e-9.
double normal_quantile(double p);

struct Interval {
  double mean = 0.0;
  double half_width = 0.0;
};

// CLT interval for the mean of `values` at significance `alpha`:
// half_width = z_{1-alpha/2} * sqrt(s^2 / r), with s^2 the Bessel-corrected
// sample variance and r the number of values. Throws for r < 2 or alpha
// outside (0, 1).
Interval confidence_interval(std::span<const double> values, double alpha);

// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson_correlation(std::span<const double> xs,
                                          std::span<const double> ys);

// Least-squares slope of log(y) against log(x); requires >= 2 strictly
// positive points.
double log_log_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace grec
