#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <vector>

#include "sphwhittle/sampling.hpp"
#include "sphwhittle/stats.hpp"
#include "sphwhittle/whittle.hpp"

using namespace sphwhittle;

namespace {

// Kolmogorov-Smirnov distance of a sample against a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

struct Moments {
  double mean, var, se_mean, se_var;
};

// Sample mean and variance with their Monte Carlo standard errors.
Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double m = sample_mean(xs);
  const double v = sample_variance(xs);
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - m, 4);
  m4 /= n;
  return {m, v, std::sqrt(v / n), std::sqrt((m4 - v * v) / n)};
}

}  // namespace

TEST(Sampling, EmpiricalIsPositiveAndDeterministic) {
  const auto model = SpectrumModel::power_law(2, 3);
  const auto a = sample_empirical(model, 500, {42, 7});
  const auto b = sample_empirical(model, 500, {42, 7});
  const auto c = sample_empirical(model, 500, {42, 8});
  ASSERT_EQ(a.l_max(), 500u);
  EXPECT_FALSE(a.debiased());
  for (std::size_t l = 1; l <= 500; ++l) {
    EXPECT_GT(a[l], 0.0);
    EXPECT_EQ(a[l], b[l]);
  }
  EXPECT_NE(a[10], c[10]);
}

TEST(Sampling, EmpiricalMomentsAtL50) {
  const auto model = SpectrumModel::power_law(2, 3);
  const std::size_t l = 50;
  const double c = model.value(l);
  std::vector<double> ratio(100000);
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    ratio[i] = sample_empirical(model, l, {1, i})[l] / c;
  }
  const auto m = moments(ratio);
  EXPECT_NEAR(m.mean, 1.0, 0.01);
  EXPECT_NEAR(m.var, 2.0 / 101.0, 0.1 * 2.0 / 101.0);
  EXPECT_NEAR(m.mean, 1.0, 3 * m.se_mean);
  EXPECT_NEAR(m.var, 2.0 / 101.0, 3 * m.se_var);
}

TEST(Sampling, ChiSquaredGoodnessOfFit) {
  const auto model = SpectrumModel::power_law(2, 3);
  const std::size_t l = 10;
  const double c = model.value(l);
  std::vector<double> x(10000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 21.0 * sample_empirical(model, l, {3, i})[l] / c;
  const boost::math::chi_squared chi(21.0);
  const double d = ks_distance(x, [&](double v) { return boost::math::cdf(chi, v); });
  EXPECT_LT(d, 1.628 / std::sqrt(10000.0));
}

TEST(Sampling, AlmLayout) {
  const auto model = SpectrumModel::power_law(2, 3);
  const auto a = sample_alm(model, 1, {0, 0});
  EXPECT_EQ(a.data().size(), 3u);
  EXPECT_EQ(HarmonicCoefficients::storage_size(10), 120u);  // sum_{l=1}^{10} (2l+1)
  EXPECT_EQ(HarmonicCoefficients::offset(3), 8u);           // 3 + 5
}

TEST(Sampling, AlmMoments) {
  const auto model = SpectrumModel::power_law(2, 3);
  const std::size_t l = 5;
  const double c = model.value(l);
  std::vector<double> a0(100000), re3(100000);
  for (std::size_t i = 0; i < a0.size(); ++i) {
    const auto coeffs = sample_alm(model, l, {11, i});
    a0[i] = coeffs.a0(l);
    re3[i] = coeffs.re(l, 3);
  }
  EXPECT_NEAR(sample_variance(a0), c, 0.02 * c);
  EXPECT_NEAR(sample_variance(re3), c / 2, 0.02 * c / 2);
}

TEST(Sampling, EmpiricalFromAlmDirectSums) {
  HarmonicCoefficients h(1);
  h.a0(1) = 1.0;
  EXPECT_DOUBLE_EQ(empirical_from_alm(h)[1], 1.0 / 3.0);
  h.re(1, 1) = 1.0;
  h.im(1, 1) = 1.0;
  EXPECT_DOUBLE_EQ(empirical_from_alm(h)[1], 5.0 / 3.0);

  HarmonicCoefficients zero(3);
  try {
    empirical_from_alm(zero);
    FAIL() << "zero coefficients must be rejected";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_positive_value);
  }
}

TEST(Sampling, AlmPathMatchesChiSquaredPathInDistribution) {
  const auto model = SpectrumModel::kappa_perturbed(2, 3, 1);
  const std::size_t l = 20;
  const double c = model.value(l);
  std::vector<double> direct(10000), via_alm(10000);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    direct[i] = sample_empirical(model, l, {5, i})[l] / c;
    via_alm[i] = empirical_from_alm(sample_alm(model, l, {6, i}))[l] / c;
  }
  const double crit = 1.628 * std::sqrt(2.0 / 10000.0);
  EXPECT_LT(ks_two_sample(direct, via_alm), crit);
}

TEST(Sampling, DebiasedReducesToNoiselessAsNoiseVanishes) {
  const auto model = SpectrumModel::power_law(2, 3);
  const auto clean = sample_empirical(model, 200, {9, 1});
  const auto noisy = sample_observed_debiased(model, NoiseModel(1e-300, 2.5), 200, {9, 1});
  EXPECT_TRUE(noisy.debiased());
  for (std::size_t l = 1; l <= 200; ++l) EXPECT_DOUBLE_EQ(noisy[l], clean[l]);
}

TEST(Sampling, DebiasedMomentsAtL30) {
  const auto model = SpectrumModel::power_law(2, 3);
  const NoiseModel noise(1, 2.5);
  const std::size_t l = 30;
  const double ct = model.value(l), cn = noise.value(l);
  std::vector<double> r(100000);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = sample_observed_debiased(model, noise, l, {13, i})[l] / ct;
  }
  const auto m = moments(r);
  const double expected_var = debiased_variance_ratio(l, ct, cn);
  EXPECT_NEAR(expected_var, 2.0 / 61.0 * std::pow(1 + cn / ct, 2), 1e-15);
  EXPECT_NEAR(m.mean, 1.0, 0.01);
  EXPECT_NEAR(m.var, expected_var, 0.1 * expected_var);
  EXPECT_NEAR(m.var, expected_var, 3 * m.se_var);
}

TEST(Sampling, DebiasedValuesMayBeNegative) {
  const auto model = SpectrumModel::power_law(2, 3);
  const NoiseModel noise(100, 2.1);
  int negatives = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto s = sample_observed_debiased(model, noise, 3, {17, i});
    negatives += s[1] < 0.0;
  }
  EXPECT_GT(negatives, 0);
}
