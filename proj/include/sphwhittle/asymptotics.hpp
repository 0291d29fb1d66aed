#ifndef SPHWHITTLE_ASYMPTOTICS_HPP
#define SPHWHITTLE_ASYMPTOTICS_HPP

/// Closed-form limits of the weighted power-log sums that govern the
/// estimator's variance and consistency, together with direct summations
/// of the same quantities. Used as analytic oracles and by `oracle` in the CLI.

#include <cmath>
#include <cstddef>

#include "sphwhittle/error.hpp"
#include "sphwhittle/spectrum.hpp"
#include "sphwhittle/summation.hpp"

namespace sphwhittle {

struct PowerLogIntegral {
  double l_lo;
  double l_hi;
  double s;
  int k;
};

/// Closed form of  int_{l_lo}^{l_hi} 2 x^{1+s} log^k x dx,  k in {0, 1, 2}.
inline double power_log_integral(const PowerLogIntegral& p) {
  if (p.s == -2.0) detail::fail(errc::singular_exponent, "s = -2");
  detail::require(p.l_lo > 0.0 && p.l_lo < p.l_hi, errc::invalid_argument,
                  "need 0 < l_lo < l_hi");
  detail::require(p.k >= 0 && p.k <= 2, errc::invalid_argument, "k must be 0, 1 or 2");
  const double h = 1.0 + p.s / 2.0;
  // Antiderivative of 2 x^{1+s} log^k x, with b = 2h = 2 + s.
  auto anti = [&](double x) {
    const double xb = pow_l(x, 2.0 * h);
    const double lx = std::log(x);
    switch (p.k) {
      case 0: return xb / h;
      case 1: return xb * lx / h - xb / (2.0 * h * h);
      default: return xb * lx * lx / h - xb * lx / (h * h) + xb / (2.0 * h * h * h);
    }
  };
  return anti(p.l_hi) - anti(p.l_lo);
}

namespace detail {

/// Weighted sums with weights (2l+1) l^s over [lo, hi]:
///   Z = sum w * sum w log^2 l - (sum w log l)^2,
/// evaluated in the equivalent centred form  (sum w) * sum w (log l - mu)^2.
inline double z_statistic(std::size_t lo, std::size_t hi, double s) {
  CompensatedSum w_sum, wl_sum;
  for (std::size_t l = lo; l <= hi; ++l) {
    const double x = static_cast<double>(l);
    const double w = (2.0 * x + 1.0) * pow_l(x, s);
    w_sum += w;
    wl_sum += w * std::log(x);
  }
  const double mu = wl_sum.value() / w_sum.value();
  CompensatedSum dev;
  for (std::size_t l = lo; l <= hi; ++l) {
    const double x = static_cast<double>(l);
    const double d = std::log(x) - mu;
    dev += (2.0 * x + 1.0) * pow_l(x, s) * d * d;
  }
  return w_sum.value() * dev.value();
}

}  // namespace detail

/// Z_L(s) over l = 1..L. Tends to L^{4+2s} / (4 (1+s/2)^4).
inline double z_fullband(std::size_t L, double s) {
  detail::require(L >= 2, errc::invalid_argument, "z_fullband needs L >= 2");
  return detail::z_statistic(1, L, s);
}

/// Lower edge 1 + floor(L (1-g)) of the band used by z_narrowband.
inline std::size_t z_band_lower(std::size_t L, double g) {
  return 1 + static_cast<std::size_t>(std::floor(static_cast<double>(L) * (1.0 - g)));
}

/// Z over the narrow band [1 + floor(L(1-g)), L].
inline double z_narrowband(std::size_t L, double g, double s) {
  detail::require(g > 0.0 && g < 1.0, errc::invalid_argument, "g must lie in (0, 1)");
  if (static_cast<double>(L) * g < 3.0) {
    detail::fail(errc::band_too_narrow, "narrow band needs L*g >= 3");
  }
  const std::size_t lo = z_band_lower(L, g);
  if (lo > L || L - lo < 2) detail::fail(errc::band_too_narrow, "fewer than three multipoles");
  return detail::z_statistic(lo, L, s);
}

/// 1 / (4 (1+s/2)^4), the full-band limit of Z_L(s) / L^{4+2s}.
inline double z_fullband_limit(double s) {
  const double h = 1.0 + s / 2.0;
  return 1.0 / (4.0 * h * h * h * h);
}

/// K(s) = (s^2/12 - s/8 + 1/3) / (1+s/2)^2.
inline double k_factor(double s) {
  detail::require(s > -2.0, errc::invalid_argument, "K(s) needs s > -2");
  const double h = 1.0 + s / 2.0;
  return (s * s / 12.0 - s / 8.0 + 1.0 / 3.0) / (h * h);
}

/// (1 + x/2) - log(1 + x/2) - 1: the limit of R(alpha0 + x) - R(alpha0) on
/// noiseless data. Non-negative, zero only at x = 0.
inline double u_limit(double x) {
  if (x == -2.0) detail::fail(errc::singular_exponent, "x = -2");
  detail::require(x > -2.0, errc::invalid_argument, "u_limit needs x > -2");
  const double h = x / 2.0;
  return h - std::log1p(h);
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_ASYMPTOTICS_HPP
