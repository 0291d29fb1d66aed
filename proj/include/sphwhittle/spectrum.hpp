#ifndef SPHWHITTLE_SPECTRUM_HPP
#define SPHWHITTLE_SPECTRUM_HPP

/// Signal and noise angular power spectrum models.
///
/// A signal model has the semiparametric form C_l = G(l) l^{-alpha0} with
/// G(l) = G0 (1 + kappa/l + o(1/l)). Four concrete forms are representable:
/// an exact power law, a first-order perturbed power law, a ratio of positive
/// polynomials times a power law, and a plain table of measured values.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sphwhittle/error.hpp"

namespace sphwhittle {

/// l^s evaluated as exp(s ln l), used for every real power in the library.
inline double pow_l(double l, double s) noexcept { return std::exp(s * std::log(l)); }

struct ExactPowerLaw {
  double g0;
  double alpha0;
};

/// C_l = G0 (1 + kappa/l) l^{-alpha0}.
struct KappaPerturbed {
  double g0;
  double alpha0;
  double kappa;
};

/// C_l = (P(l)/Q(l)) l^{-alpha0}; coefficients are stored highest degree first.
struct Rational {
  std::vector<double> p;
  std::vector<double> q;
  double alpha0;
  std::size_t l_max;  // positivity of P and Q was verified on 1..l_max
};

/// Externally supplied values for l = 1..values.size().
struct Tabulated {
  std::vector<double> values;
};

struct AsymptoticParams {
  double g0;
  double alpha0;
  double kappa;
};

namespace detail {

inline double horner(const std::vector<double>& coeffs, double x) noexcept {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

}  // namespace detail

class SpectrumModel {
 public:
  using variant_type = std::variant<ExactPowerLaw, KappaPerturbed, Rational, Tabulated>;

  static SpectrumModel power_law(double g0, double alpha0) {
    check_common(g0, alpha0);
    return SpectrumModel(ExactPowerLaw{g0, alpha0});
  }

  static SpectrumModel kappa_perturbed(double g0, double alpha0, double kappa) {
    check_common(g0, alpha0);
    detail::require(std::isfinite(kappa) && kappa > -1.0, errc::invalid_argument,
                    "kappa must exceed -1 so that 1 + kappa/l > 0 for every l >= 1");
    return SpectrumModel(KappaPerturbed{g0, alpha0, kappa});
  }

  /// Positivity of both polynomials is checked by direct evaluation on 1..l_max.
  static SpectrumModel rational(std::vector<double> p, std::vector<double> q, double alpha0,
                                std::size_t l_max) {
    detail::require(std::isfinite(alpha0) && alpha0 >= 2.0, errc::invalid_argument,
                    "alpha0 must be at least 2");
    detail::require(!p.empty() && p.size() == q.size(), errc::invalid_argument,
                    "rational model needs numerator and denominator of equal order");
    detail::require(p.front() > 0.0 && q.front() > 0.0, errc::invalid_argument,
                    "leading coefficients must be positive");
    detail::require(l_max >= 1, errc::invalid_argument, "l_max must be at least 1");
    for (std::size_t l = 1; l <= l_max; ++l) {
      const auto x = static_cast<double>(l);
      if (!(detail::horner(p, x) > 0.0) || !(detail::horner(q, x) > 0.0)) {
        detail::fail(errc::invalid_argument,
                     "polynomial not positive at l = " + std::to_string(l));
      }
    }
    return SpectrumModel(Rational{std::move(p), std::move(q), alpha0, l_max});
  }

  static SpectrumModel tabulated(std::vector<double> values) {
    detail::require(!values.empty(), errc::invalid_argument, "empty spectrum table");
    for (double v : values) {
      detail::require(std::isfinite(v) && v > 0.0, errc::invalid_argument,
                      "tabulated spectrum values must be positive");
    }
    return SpectrumModel(Tabulated{std::move(values)});
  }

  const variant_type& variant() const noexcept { return model_; }

  bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(model_); }

  /// Largest multipole the model may be evaluated at, if bounded.
  std::optional<std::size_t> max_multipole() const noexcept {
    if (const auto* t = std::get_if<Tabulated>(&model_)) return t->values.size();
    if (const auto* r = std::get_if<Rational>(&model_)) return r->l_max;
    return std::nullopt;
  }

  double value(std::size_t l) const {
    detail::require(l >= 1, errc::out_of_range, "multipole must be >= 1");
    if (auto bound = max_multipole(); bound && l > *bound) {
      detail::fail(errc::out_of_range, "multipole " + std::to_string(l) +
                                           " beyond model range " + std::to_string(*bound));
    }
    const auto x = static_cast<double>(l);
    return std::visit(
        [x, l](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ExactPowerLaw>) {
            return m.g0 * pow_l(x, -m.alpha0);
          } else if constexpr (std::is_same_v<T, KappaPerturbed>) {
            return m.g0 * (1.0 + m.kappa / x) * pow_l(x, -m.alpha0);
          } else if constexpr (std::is_same_v<T, Rational>) {
            return detail::horner(m.p, x) / detail::horner(m.q, x) * pow_l(x, -m.alpha0);
          } else {
            return m.values[l - 1];
          }
        },
        model_);
  }

  /// (G0, alpha0, kappa). For the rational form G0 = p_k/q_k and
  /// kappa = p_{k-1}/p_k - q_{k-1}/q_k.
  AsymptoticParams asymptotic_params() const {
    return std::visit(
        [](const auto& m) -> AsymptoticParams {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ExactPowerLaw>) {
            return {m.g0, m.alpha0, 0.0};
          } else if constexpr (std::is_same_v<T, KappaPerturbed>) {
            return {m.g0, m.alpha0, m.kappa};
          } else if constexpr (std::is_same_v<T, Rational>) {
            const double kappa =
                m.p.size() < 2 ? 0.0 : m.p[1] / m.p[0] - m.q[1] / m.q[0];
            return {m.p[0] / m.q[0], m.alpha0, kappa};
          } else {
            detail::fail(errc::unsupported, "tabulated spectra carry no asymptotic parameters");
          }
        },
        model_);
  }

  /// C_1..C_L.
  std::vector<double> values(std::size_t L) const {
    std::vector<double> out(L);
    for (std::size_t l = 1; l <= L; ++l) out[l - 1] = value(l);
    return out;
  }

 private:
  explicit SpectrumModel(variant_type m) : model_(std::move(m)) {}

  static void check_common(double g0, double alpha0) {
    detail::require(std::isfinite(g0) && g0 > 0.0, errc::invalid_argument, "g0 must be positive");
    detail::require(std::isfinite(alpha0) && alpha0 >= 2.0, errc::invalid_argument,
                    "alpha0 must be at least 2");
  }

  variant_type model_;
};

inline double spectrum_value(const SpectrumModel& model, std::size_t l) { return model.value(l); }

inline AsymptoticParams asymptotic_params(const SpectrumModel& model) {
  return model.asymptotic_params();
}

/// Known observational noise, C_{N,l} = G_N l^{-gamma}.
class NoiseModel {
 public:
  NoiseModel(double g_n, double gamma) : g_n_(g_n), gamma_(gamma) {
    detail::require(std::isfinite(g_n) && g_n > 0.0, errc::invalid_argument,
                    "noise amplitude must be positive");
    // gamma <= 2 is admitted so the divergent regime (gamma < alpha0 - 1) can be simulated.
    detail::require(std::isfinite(gamma) && gamma > 0.0, errc::invalid_argument,
                    "noise index must be positive");
  }

  double g_n() const noexcept { return g_n_; }
  double gamma() const noexcept { return gamma_; }

  double value(std::size_t l) const { return g_n_ * pow_l(static_cast<double>(l), -gamma_); }

 private:
  double g_n_;
  double gamma_;
};

inline double noise_value(const NoiseModel& noise, std::size_t l) { return noise.value(l); }

}  // namespace sphwhittle

#endif  // SPHWHITTLE_SPECTRUM_HPP
