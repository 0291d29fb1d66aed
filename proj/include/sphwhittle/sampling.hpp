#ifndef SPHWHITTLE_SAMPLING_HPP
#define SPHWHITTLE_SAMPLING_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sphwhittle/error.hpp"
#include "sphwhittle/rng.hpp"
#include "sphwhittle/spectrum.hpp"

namespace sphwhittle {

/// Realized spectrum over multipoles 1..L. Raw spectra are strictly positive;
/// debiased spectra (observed minus known noise) may take any sign.
class EmpiricalSpectrum {
 public:
  EmpiricalSpectrum(std::vector<double> values, bool debiased = false)
      : values_(std::move(values)), debiased_(debiased) {
    detail::require(!values_.empty(), errc::invalid_argument, "empty spectrum");
    for (double v : values_) {
      detail::require(std::isfinite(v), errc::invalid_argument, "non-finite spectrum value");
      if (!debiased_) {
        detail::require(v > 0.0, errc::non_positive_value,
                        "raw empirical spectrum values must be positive");
      }
    }
  }

  std::size_t l_max() const noexcept { return values_.size(); }
  bool debiased() const noexcept { return debiased_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Value at multipole l (1-based).
  double operator[](std::size_t l) const noexcept { return values_[l - 1]; }
  double at(std::size_t l) const {
    detail::require(l >= 1 && l <= values_.size(), errc::out_of_range, "multipole out of range");
    return values_[l - 1];
  }

 private:
  std::vector<double> values_;
  bool debiased_;
};

/// Real degrees of freedom of a_{lm}, l = 1..L. Per multipole the block is
/// [a_l0, Re a_l1, Im a_l1, ..., Re a_ll, Im a_ll]; negative orders follow
/// from a_{l,-m} = (-1)^m conj(a_lm) and are not stored.
class HarmonicCoefficients {
 public:
  explicit HarmonicCoefficients(std::size_t L) : l_max_(L), data_(storage_size(L), 0.0) {
    detail::require(L >= 1, errc::invalid_argument, "L must be at least 1");
  }

  static constexpr std::size_t storage_size(std::size_t L) noexcept { return L * (L + 2); }
  static constexpr std::size_t offset(std::size_t l) noexcept { return (l - 1) * (l + 1); }

  std::size_t l_max() const noexcept { return l_max_; }
  std::span<const double> data() const noexcept { return data_; }

  std::span<double> block(std::size_t l) noexcept { return {data_.data() + offset(l), 2 * l + 1}; }
  std::span<const double> block(std::size_t l) const noexcept {
    return {data_.data() + offset(l), 2 * l + 1};
  }

  double& a0(std::size_t l) noexcept { return block(l)[0]; }
  double& re(std::size_t l, std::size_t m) noexcept { return block(l)[2 * m - 1]; }
  double& im(std::size_t l, std::size_t m) noexcept { return block(l)[2 * m]; }
  double a0(std::size_t l) const noexcept { return block(l)[0]; }
  double re(std::size_t l, std::size_t m) const noexcept { return block(l)[2 * m - 1]; }
  double im(std::size_t l, std::size_t m) const noexcept { return block(l)[2 * m]; }

 private:
  std::size_t l_max_;
  std::vector<double> data_;
};

/// C_hat_l = C_l X_l / (2l+1) with X_l ~ chi^2_{2l+1}, one gamma draw per multipole.
inline EmpiricalSpectrum sample_empirical(const SpectrumModel& model, std::size_t L,
                                          const SeedSpec& seed) {
  detail::require(L >= 1, errc::invalid_argument, "L must be at least 1");
  RandomStream rng(seed);
  std::vector<double> out(L);
  for (std::size_t l = 1; l <= L; ++l) {
    const double dof = 2.0 * static_cast<double>(l) + 1.0;
    out[l - 1] = model.value(l) * rng.chi_squared(dof) / dof;
  }
  return EmpiricalSpectrum(std::move(out));
}

/// a_l0 ~ N(0, C_l); Re a_lm, Im a_lm ~ N(0, C_l/2) for m >= 1, all independent.
inline HarmonicCoefficients sample_alm(const SpectrumModel& model, std::size_t L,
                                       const SeedSpec& seed) {
  HarmonicCoefficients coeffs(L);
  RandomStream rng(seed);
  for (std::size_t l = 1; l <= L; ++l) {
    const double c = model.value(l);
    const double sd0 = std::sqrt(c);
    const double sd = std::sqrt(0.5 * c);
    auto blk = coeffs.block(l);
    blk[0] = sd0 * rng.normal();
    for (std::size_t i = 1; i < blk.size(); ++i) blk[i] = sd * rng.normal();
  }
  return coeffs;
}

/// (a_l0^2 + 2 sum_m [(Re a_lm)^2 + (Im a_lm)^2]) / (2l+1).
inline EmpiricalSpectrum empirical_from_alm(const HarmonicCoefficients& coeffs) {
  std::vector<double> out(coeffs.l_max());
  for (std::size_t l = 1; l <= coeffs.l_max(); ++l) {
    const auto blk = coeffs.block(l);
    double acc = 0.0;
    for (std::size_t i = 1; i < blk.size(); ++i) acc += blk[i] * blk[i];
    out[l - 1] = (blk[0] * blk[0] + 2.0 * acc) / static_cast<double>(2 * l + 1);
  }
  return EmpiricalSpectrum(std::move(out));
}

/// Observed spectrum of signal plus independent noise with the known noise
/// spectrum subtracted. Uses the same draws as sample_empirical for a given
/// seed, so G_N -> 0 recovers it exactly.
inline EmpiricalSpectrum sample_observed_debiased(const SpectrumModel& model,
                                                  const NoiseModel& noise, std::size_t L,
                                                  const SeedSpec& seed) {
  detail::require(L >= 1, errc::invalid_argument, "L must be at least 1");
  RandomStream rng(seed);
  std::vector<double> out(L);
  for (std::size_t l = 1; l <= L; ++l) {
    const double dof = 2.0 * static_cast<double>(l) + 1.0;
    const double cn = noise.value(l);
    out[l - 1] = (model.value(l) + cn) * rng.chi_squared(dof) / dof - cn;
  }
  return EmpiricalSpectrum(std::move(out), true);
}

/// The model's own values C_1..C_L as a (non-random) spectrum.
inline EmpiricalSpectrum exact_spectrum(const SpectrumModel& model, std::size_t L) {
  return EmpiricalSpectrum(model.values(L));
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_SAMPLING_HPP
