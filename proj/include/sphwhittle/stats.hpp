#ifndef SPHWHITTLE_STATS_HPP
#define SPHWHITTLE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sphwhittle/error.hpp"
#include "sphwhittle/summation.hpp"

namespace sphwhittle {

inline double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Inverse standard normal CDF, Wichura's AS 241 (PPND16), ~1e-16 relative.
inline double normal_quantile(double p) {
  detail::require(p > 0.0 && p < 1.0, errc::invalid_argument, "probability must lie in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

inline double sample_mean(std::span<const double> xs) {
  detail::require(!xs.empty(), errc::empty_sample, "empty sample");
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value() / static_cast<double>(xs.size());
}

/// Unbiased (n-1) sample variance, two-pass.
inline double sample_variance(std::span<const double> xs) {
  detail::require(xs.size() >= 2, errc::empty_sample, "variance needs at least two values");
  const double m = sample_mean(xs);
  CompensatedSum s;
  for (double x : xs) s += (x - m) * (x - m);
  return s.value() / static_cast<double>(xs.size() - 1);
}

struct QuantileFrequency {
  double cutpoint;
  double percent;        // tail convention: below for cut <= 0, above for cut > 0
  double percent_below;
  double percent_above;
};

/// Percent of samples in the tail beyond each cutpoint. Negative cutpoints
/// and zero count the lower tail (x < c); positive cutpoints count the upper
/// tail (x > c). Both one-sided percentages are reported alongside.
inline std::vector<QuantileFrequency> quantile_frequencies(std::span<const double> samples,
                                                           std::span<const double> cutpoints) {
  detail::require(!samples.empty(), errc::empty_sample, "empty sample");
  const double n = static_cast<double>(samples.size());
  std::vector<QuantileFrequency> out;
  out.reserve(cutpoints.size());
  for (double c : cutpoints) {
    const auto below = std::count_if(samples.begin(), samples.end(), [c](double x) { return x < c; });
    const auto above = std::count_if(samples.begin(), samples.end(), [c](double x) { return x > c; });
    const double pb = 100.0 * static_cast<double>(below) / n;
    const double pa = 100.0 * static_cast<double>(above) / n;
    out.push_back({c, c > 0.0 ? pa : pb, pb, pa});
  }
  return out;
}

/// Cutpoints of the normal reference table.
inline const std::vector<double>& standard_cutpoints() {
  static const std::vector<double> cuts{-1.96, -1.0, -0.68, 0.0, 0.68, 1.0, 1.96};
  return cuts;
}

struct ShapiroWilkResult {
  double w;
  double p;
};

namespace detail {

inline double poly(std::span<const double> c, double x) noexcept {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace detail

/// Shapiro-Wilk W and p-value following Royston's 1995 algorithm (AS R94):
/// approximate normal-order-statistic coefficients and a normalizing
/// transform of W. Valid for 3 <= n <= 5000.
inline ShapiroWilkResult shapiro_wilk(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3 || n > 5000) {
    detail::fail(errc::sample_size_out_of_range, "Shapiro-Wilk needs 3 <= n <= 5000");
  }
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  if (!(x.back() - x.front() > 1e-19 * std::max(1.0, std::fabs(x.front())))) {
    detail::fail(errc::degenerate_sample, "all values equal");
  }

  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> a(half);  // positive coefficients for the upper half
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first;
    double fac;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the data and the antisymmetric coefficients.
  const double mean = sample_mean(x);
  CompensatedSum num, ss;
  for (std::size_t i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  for (double v : x) ss += (v - mean) * (v - mean);
  double asum2 = 0.0;
  for (double v : a) asum2 += 2.0 * v * v;
  double w = num.value() * num.value() / (asum2 * ss.value());
  w = std::min(w, 1.0);
  const double w1 = 1.0 - w;

  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    double pw = pi6 * (std::asin(std::sqrt(w)) - stqr);
    return {w, std::clamp(pw, 0.0, 1.0)};
  }
  if (w1 <= 0.0) return {w, 1.0};

  double y = std::log(w1);
  const double xx = std::log(an);
  double mu, sigma;
  if (n <= 11) {
    const double gamma = detail::poly(g, an);
    if (y >= gamma) return {w, 1e-99};
    y = -std::log(gamma - y);
    mu = detail::poly(c3, an);
    sigma = std::exp(detail::poly(c4, an));
  } else {
    mu = detail::poly(c5, xx);
    sigma = std::exp(detail::poly(c6, xx));
  }
  return {w, normal_cdf(-(y - mu) / sigma)};
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_STATS_HPP
