#include "grec/stats.hpp"

#include <cmath>
#include <string>

#include "grec/error.hpp"

namespace grec {

namespace {

bool all_equal(std::span<const double> values) {
  for (const double v : values) {
    if (v != values.front()) return false;
  }
  return true;
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "mean of no values");
  // Constant input: summing can round (n * v need not be representable), and
  // a constant sequence must report its value and zero spread exactly.
  if (all_equal(values)) return values.front();
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::insufficient_groups, "sample variance needs at least 2 values");
  }
  if (all_equal(values)) return 0.0;
  const double m = mean(values);
  double sum_sq = 0.0;
  for (const double v : values) {
    const double d = v - m;
    sum_sq += d * d;
  }
  return sum_sq / static_cast<double>(values.size() - 1);
}

namespace {

double poly(const double (&c)[8], double x) {
  return ((((((c[7] * x + c[6]) * x + c[5]) * x + c[4]) * x + c[3]) * x + c[2]) * x + c[1]) * x +
         c[0];
}

}  // namespace

// Rational approximation of the standard normal inverse CDF (Wichura's
// algorithm, double-precision constants). Relative error is around 1e-15
// over the whole open interval.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "normal quantile requires p in (0, 1)");
  }

  static constexpr double a[8] = {
      3.3871328727963666080e+0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[8] = {
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr double c[8] = {
      1.42343711074968357734e+0, 4.63033784615654529590e+0, 5.76949722146069140550e+0,
      3.64784832476320460504e+0, 1.27045825245236838258e+0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[8] = {
      1.0,                       2.05319162663775882187e+0, 1.67638483018380384940e+0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {
      6.65790464350110377720e+0, 5.46378491116411436990e+0, 1.78482653991729133580e+0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    value = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -value : value;
}

Interval confidence_interval(std::span<const double> values, double alpha) {
  if (values.size() < 2) {
    throw Error(ErrorKind::insufficient_groups,
                "confidence interval needs at least 2 group values, got " +
                    std::to_string(values.size()));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
  }
  Interval interval;
  interval.mean = mean(values);
  const double variance = sample_variance(values);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  interval.half_width = z * std::sqrt(variance / static_cast<double>(values.size()));
  return interval;
}

std::optional<double> pearson_correlation(std::span<const double> xs,
                                          std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorKind::invalid_argument, "correlation inputs differ in length");
  }
  if (xs.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "correlation needs at least 2 points");
  }
  // A constant coordinate makes the correlation undefined; check for it
  // directly rather than through the rounded sums.
  if (all_equal(xs) || all_equal(ys)) return std::nullopt;
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

double log_log_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "slope fit needs >= 2 paired points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "slope fit needs strictly positive points");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::invalid_argument, "slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace grec
