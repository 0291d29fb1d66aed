#ifndef SPHWHITTLE_WHITTLE_HPP
#define SPHWHITTLE_WHITTLE_HPP

/// Spherical Whittle estimation of the spectral index.
///
/// For a band [L1, L] with weights w_l = 2l+1 the amplitude-concentrated
/// objective is
///
///   R(alpha) = log G_hat(alpha) - alpha * mean_w(log l),
///   G_hat(alpha) = sum w_l C_hat_l l^alpha / sum w_l,
///
/// and alpha_hat = argmin R over a compact search box. Full band is L1 = 1;
/// the narrow-band estimator uses L1 = L (1 - g(L)) with g(L) = O(1/log L).
/// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sphwhittle/error.hpp"
#include "sphwhittle/minimize.hpp"
#include "sphwhittle/sampling.hpp"
#include "sphwhittle/spectrum.hpp"
#include "sphwhittle/summation.hpp"

namespace sphwhittle {

/// Estimation window [l_lo, l_hi], inclusive.
class Band {
 public:
  Band(std::size_t l_lo, std::size_t l_hi) : l_lo_(l_lo), l_hi_(l_hi) {
    detail::require(l_lo >= 1 && l_lo <= l_hi, errc::invalid_argument,
                    "band must satisfy 1 <= l_lo <= l_hi");
  }

  static Band full(std::size_t L) { return Band(1, L); }

  std::size_t l_lo() const noexcept { return l_lo_; }
  std::size_t l_hi() const noexcept { return l_hi_; }
  std::size_t size() const noexcept { return l_hi_ - l_lo_ + 1; }
  bool is_full() const noexcept { return l_lo_ == 1; }

  /// g = 1 - L1/L.
  double fraction() const noexcept {
    return 1.0 - static_cast<double>(l_lo_) / static_cast<double>(l_hi_);
  }

  friend bool operator==(const Band&, const Band&) = default;

 private:
  std::size_t l_lo_;
  std::size_t l_hi_;
};

struct SearchBox {
  double alpha_min = 2.01;
  double alpha_max = 10.0;
  double tol = 1e-6;
  int max_evaluations = 200;

  void validate() const {
    detail::require(std::isfinite(alpha_min) && std::isfinite(alpha_max) && alpha_min > 0.0 &&
                        alpha_max > alpha_min,
                    errc::invalid_argument, "search box needs 0 < alpha_min < alpha_max");
    detail::require(tol > 0.0, errc::invalid_argument, "tolerance must be positive");
    detail::require(max_evaluations >= 3, errc::invalid_argument, "too few evaluations allowed");
  }
};

struct EstimateResult {
  double alpha_hat;
  double g_hat;
  double objective;
  Band band;
  int evaluations;
  bool converged;
  bool boundary_hit;
};

/// Band-local precomputation: weights 2l+1, log l and the weighted mean of log l.
/// Power sums are evaluated relative to l_hi^alpha so large exponents do not
/// overflow; ratios such as the score are unaffected by the scale.
class WhittleTerms {
 public:
  WhittleTerms(const EmpiricalSpectrum& spec, const Band& band) : band_(band) {
    detail::require(band.l_hi() <= spec.l_max(), errc::out_of_range,
                    "band exceeds the spectrum's multipole range");
    const std::size_t n = band.size();
    c_.resize(n);
    log_l_.resize(n);
    weight_.resize(n);
    CompensatedSum wsum, wlog;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t l = band.l_lo() + i;
      c_[i] = spec[l];
      log_l_[i] = std::log(static_cast<double>(l));
      weight_[i] = static_cast<double>(2 * l + 1);
      wsum += weight_[i];
      wlog += weight_[i] * log_l_[i];
    }
    weight_sum_ = wsum.value();
    mean_log_ = wlog.value() / weight_sum_;
    log_top_ = log_l_.back();
  }

  const Band& band() const noexcept { return band_; }
  double weight_sum() const noexcept { return weight_sum_; }
  double mean_log() const noexcept { return mean_log_; }
  double log_top() const noexcept { return log_top_; }

  struct Moments {
    double m0, m1, m2;  // sum w C l^alpha log^k l / sum w, each divided by l_hi^alpha
  };

  Moments scaled_moments(double alpha) const {
    CompensatedSum s0, s1, s2;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const double t = weight_[i] * c_[i] * std::exp(alpha * (log_l_[i] - log_top_));
      s0 += t;
      s1 += t * log_l_[i];
      s2 += t * log_l_[i] * log_l_[i];
    }
    return {s0.value() / weight_sum_, s1.value() / weight_sum_, s2.value() / weight_sum_};
  }

  double scaled_amplitude(double alpha) const {
    CompensatedSum s0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      s0 += weight_[i] * c_[i] * std::exp(alpha * (log_l_[i] - log_top_));
    }
    return s0.value() / weight_sum_;
  }

  double objective(double alpha) const {
    const double g = scaled_amplitude(alpha);
    if (!(g > 0.0)) {
      detail::fail(errc::non_positive_amplitude,
                   "G_hat(" + std::to_string(alpha) + ") <= 0 over the band");
    }
    return std::log(g) + alpha * (log_top_ - mean_log_);
  }

  double amplitude(double alpha) const {
    return scaled_amplitude(alpha) * std::exp(alpha * log_top_);
  }

  std::span<const double> values() const noexcept { return c_; }
  std::span<const double> log_l() const noexcept { return log_l_; }
  std::span<const double> weights() const noexcept { return weight_; }

 private:
  Band band_;
  std::vector<double> c_, log_l_, weight_;
  double weight_sum_ = 0.0;
  double mean_log_ = 0.0;
  double log_top_ = 0.0;
};

/// G_hat_k(alpha) = sum w_l (log l)^k C_hat_l l^alpha / sum w_l; k = 0 is G_hat.
inline double g_hat_k(const EmpiricalSpectrum& spec, double alpha, int k, const Band& band) {
  detail::require(k >= 0 && k <= 2, errc::invalid_argument, "k must be 0, 1 or 2");
  const WhittleTerms terms(spec, band);
  const auto m = terms.scaled_moments(alpha);
  const double scaled = k == 0 ? m.m0 : (k == 1 ? m.m1 : m.m2);
  return scaled * std::exp(alpha * terms.log_top());
}

inline double objective(const EmpiricalSpectrum& spec, double alpha, const Band& band) {
  return WhittleTerms(spec, band).objective(alpha);
}

/// Un-concentrated Whittle sum  sum w_l [C_hat_l l^alpha / g - log(C_hat_l l^alpha / g)].
inline double joint_objective(const EmpiricalSpectrum& spec, double alpha, double g,
                              const Band& band) {
  detail::require(g > 0.0, errc::invalid_argument, "amplitude must be positive");
  detail::require(band.l_hi() <= spec.l_max(), errc::out_of_range,
                  "band exceeds the spectrum's multipole range");
  CompensatedSum acc;
  for (std::size_t l = band.l_lo(); l <= band.l_hi(); ++l) {
    const double c = spec[l];
    if (!(c > 0.0)) detail::fail(errc::non_positive_value, "C_hat_l <= 0 inside the band");
    const double ratio = c * pow_l(static_cast<double>(l), alpha) / g;
    acc += static_cast<double>(2 * l + 1) * (ratio - std::log(ratio));
  }
  return acc.value();
}

/// dR/dalpha = G_1/G_0 - mean_w(log l).
inline double score(const EmpiricalSpectrum& spec, double alpha, const Band& band) {
  const WhittleTerms terms(spec, band);
  const auto m = terms.scaled_moments(alpha);
  if (!(m.m0 > 0.0)) detail::fail(errc::non_positive_amplitude, "G_hat <= 0 over the band");
  return m.m1 / m.m0 - terms.mean_log();
}

/// d^2R/dalpha^2 = (G_2 G_0 - G_1^2) / G_0^2.
inline double curvature(const EmpiricalSpectrum& spec, double alpha, const Band& band) {
  const WhittleTerms terms(spec, band);
  const auto m = terms.scaled_moments(alpha);
  if (!(m.m0 > 0.0)) detail::fail(errc::non_positive_amplitude, "G_hat <= 0 over the band");
  const double r1 = m.m1 / m.m0;
  return m.m2 / m.m0 - r1 * r1;
}

inline EstimateResult estimate(const WhittleTerms& terms, const SearchBox& box) {
  box.validate();
  const Band& band = terms.band();
  detail::require(band.size() >= 2, errc::degenerate_band,
                  "estimation band needs at least two multipoles");

  const double a1 = box.alpha_min, a2 = box.alpha_max;
  const double f_lo = terms.objective(a1);
  const double f_hi = terms.objective(a2);
  terms.objective(0.5 * (a1 + a2));

  auto f = [&terms](double a) { return terms.objective(a); };
  auto m = brent_minimize(f, a1, a2, box.tol, std::max(3, box.max_evaluations - 3));
  int evals = m.evaluations + 3;

  // The interpolating search never lands exactly on an end of the box.
  double alpha_hat = m.x, obj = m.fx;
  if (f_lo < obj) alpha_hat = a1, obj = f_lo;
  if (f_hi < obj) alpha_hat = a2, obj = f_hi;

  const bool boundary = (alpha_hat - a1) < box.tol || (a2 - alpha_hat) < box.tol;

  // Comparing objective values pins the minimum only to about
  // sqrt(eps |R| / R''), which is coarse on narrow bands where R'' is small.
  // A few Newton steps on the analytic score recover full precision.
  if (!boundary) {
    for (int it = 0; it < 4; ++it) {
      const auto mo = terms.scaled_moments(alpha_hat);
      const double r1 = mo.m1 / mo.m0;
      const double curv = mo.m2 / mo.m0 - r1 * r1;
      if (!(mo.m0 > 0.0) || !(curv > 0.0)) break;
      const double step = (r1 - terms.mean_log()) / curv;
      const double next = alpha_hat - step;
      if (!(std::fabs(step) <= 1e-2 * (a2 - a1)) || next <= a1 || next >= a2) break;
      alpha_hat = next;
      if (std::fabs(step) <= 1e-15 * std::fabs(alpha_hat)) break;
    }
    obj = terms.objective(alpha_hat);
  }
  return {alpha_hat, terms.amplitude(alpha_hat), obj, band, evals, m.converged, boundary};
}

/// Whittle estimate of (alpha, G) over the band. A minimum within tol of
/// either end of the box sets boundary_hit.
inline EstimateResult estimate(const EmpiricalSpectrum& spec, const Band& band,
                               const SearchBox& box = {}) {
  detail::require(band.size() >= 2, errc::degenerate_band,
                  "estimation band needs at least two multipoles");
  return estimate(WhittleTerms(spec, band), box);
}

/// Narrow band [ceil(L (1 - g)), L] with g = c_g / ln L.
inline Band narrow_band(std::size_t L, double c_g) {
  detail::require(L >= 3, errc::invalid_argument, "narrow band needs L >= 3");
  detail::require(c_g > 0.0 && c_g <= 1.0, errc::invalid_argument, "c_g must lie in (0, 1]");
  const double Ld = static_cast<double>(L);
  const double g = c_g / std::log(Ld);
  detail::require(g < 1.0, errc::invalid_argument, "band fraction g must be below 1");
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(Ld * (1.0 - g))));
  if (lo > L || L - lo < 2) {
    detail::fail(errc::band_too_narrow, "narrow band collapses below three multipoles");
  }
  return Band(lo, L);
}

/// Narrow band with an explicit lower edge.
inline Band narrow_band_explicit(std::size_t L, std::size_t L1) {
  detail::require(L1 >= 1 && L1 <= L, errc::invalid_argument, "need 1 <= L1 <= L");
  if (L - L1 < 2) detail::fail(errc::band_too_narrow, "narrow band below three multipoles");
  return Band(L1, L);
}

/// c_L = (1/L) sum_{l=1}^L log l / log L.
inline double correction_factor(std::size_t L) {
  detail::require(L >= 2, errc::invalid_argument, "correction factor needs L >= 2");
  CompensatedSum acc;
  for (std::size_t l = 2; l <= L; ++l) acc += std::log(static_cast<double>(l));
  const double Ld = static_cast<double>(L);
  return acc.value() / (Ld * std::log(Ld));
}

/// H(u) = (7 + 4u + u^2) / (4 (1+u)^3).
inline double noise_h(double u) {
  detail::require(u > -1.0, errc::invalid_argument, "H(u) needs u > -1");
  const double v = 1.0 + u;
  return (7.0 + 4.0 * u + u * u) / (4.0 * v * v * v);
}

/// Var(C_tilde_l / C_T,l) = 2/(2l+1) (1 + C_N,l / C_T,l)^2.
inline double debiased_variance_ratio(std::size_t l, double c_t, double c_n) {
  detail::require(c_t > 0.0, errc::invalid_argument, "signal spectrum must be positive");
  detail::require(c_n >= 0.0, errc::invalid_argument, "noise spectrum must be non-negative");
  const double r = 1.0 + c_n / c_t;
  return 2.0 / static_cast<double>(2 * l + 1) * r * r;
}

namespace scheme {

struct FullBand {
  std::size_t L;
  bool corrected;
};
struct NarrowBand {
  std::size_t L;
  double g;
};
struct NoiseSub {
  std::size_t L;
  double alpha0;
  double gamma;
  double g0;
  double g_n;
};
struct Rate {
  std::size_t L;
};

}  // namespace scheme

using NormalizationScheme =
    std::variant<scheme::FullBand, scheme::NarrowBand, scheme::NoiseSub, scheme::Rate>;

/// Regimes of the noise-debiased estimator, by the sign of alpha0 - gamma.
enum class NoiseRegime { negligible, balanced, dominant, divergent };

inline NoiseRegime noise_regime(double alpha0, double gamma) noexcept {
  if (alpha0 < gamma) return NoiseRegime::negligible;
  if (alpha0 == gamma) return NoiseRegime::balanced;
  if (alpha0 < gamma + 1.0) return NoiseRegime::dominant;
  return NoiseRegime::divergent;
}

/// Scalar multiplying (alpha_hat - alpha0). For FullBand/NarrowBand/NoiseSub
/// the normalized error is asymptotically N(0,1); for Rate it tends to a
/// constant of magnitude |kappa|.
inline double normalization_factor(const NormalizationScheme& s) {
  constexpr double sqrt2 = std::numbers::sqrt2;
  const double f = std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        const double L = static_cast<double>(v.L);
        detail::require(v.L >= 2, errc::invalid_argument, "normalization needs L >= 2");
        if constexpr (std::is_same_v<T, scheme::FullBand>) {
          const double c = v.corrected ? correction_factor(v.L) : 1.0;
          return sqrt2 * L / (4.0 * c);
        } else if constexpr (std::is_same_v<T, scheme::NarrowBand>) {
          detail::require(v.g > 0.0 && v.g < 1.0, errc::invalid_argument, "g must lie in (0,1)");
          return L * std::sqrt(v.g * v.g * v.g) / std::sqrt(12.0);
        } else if constexpr (std::is_same_v<T, scheme::NoiseSub>) {
          detail::require(v.g0 > 0.0 && v.g_n > 0.0, errc::invalid_argument,
                          "amplitudes must be positive");
          switch (noise_regime(v.alpha0, v.gamma)) {
            case NoiseRegime::negligible:
              return sqrt2 * L / 4.0;
            case NoiseRegime::balanced: {
              const double r = 1.0 + v.g_n / v.g0;
              return sqrt2 * L / 4.0 * r * r;
            }
            case NoiseRegime::dominant: {
              const double u = v.alpha0 - v.gamma;
              return pow_l(L, 1.0 - u) * sqrt2 / (4.0 * std::sqrt(noise_h(u))) * (v.g0 / v.g_n);
            }
            case NoiseRegime::divergent:
              break;
          }
          detail::fail(errc::unsupported_regime,
                       "alpha0 >= gamma + 1: the debiased estimator is not consistent");
        } else {
          return L / (4.0 * correction_factor(v.L));
        }
      },
      s);
  return f;
}

/// NoiseSub normalization with alpha0 and G0 replaced by their estimates.
inline scheme::NoiseSub plugin_noise_scheme(const EstimateResult& est, const NoiseModel& noise) {
  return {est.band.l_hi(), est.alpha_hat, noise.gamma(), est.g_hat, noise.g_n()};
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_WHITTLE_HPP
