#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sphwhittle/stats.hpp"

using namespace sphwhittle;

namespace {

template <class F>
errc code_of(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected sphwhittle::error";
  return errc::invalid_argument;
}

struct SwCase {
  const char* name;
  std::vector<double> x;
  double w, p;
};

// Reference values from scipy.stats.shapiro (scipy 1.15).
std::vector<SwCase> sw_cases() {
  std::vector<SwCase> cases{
      {"n3", {1, 2, 4}, 0.9642857142857142, 0.6368868450289689},
      {"n5", {2.1, 3.4, 1.9, 5.6, 4.4}, 0.9320849391953863, 0.6106559022604845},
      {"n8", {0.5, 1.2, -0.3, 2.2, 0.9, 1.1, 3.8, -1.0}, 0.9607240977938507, 0.8169692031507299},
      {"n11", {1, 2, 2.5, 3.1, 3.3, 3.9, 4.2, 5, 7.5, 8.1, 12}, 0.8954958142983687, 0.16274140881185095},
  };
  SwCase n20{"n20", {}, 0.9855024573225313, 0.9844382642579528};
  for (int i = 1; i <= 20; ++i) n20.x.push_back(std::pow(std::sin(i), 3) + 0.1 * i);
  SwCase n200{"n200", {}, 0.8380010804858604, 1.165684243712119e-13};
  for (int i = 1; i <= 200; ++i) n200.x.push_back(std::tan(0.49 * std::numbers::pi * std::sin(1.7 * i)));
  SwCase n1000{"n1000", {}, 0.971850860690665, 5.257063020739983e-13};
  for (int i = 1; i <= 1000; ++i) n1000.x.push_back(std::sin(0.37 * i) + 0.5 * std::cos(1.3 * i));
  cases.push_back(n20);
  cases.push_back(n200);
  cases.push_back(n1000);
  return cases;
}

}  // namespace

TEST(Normal, CdfAndQuantile) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-12);
  for (double p : {1e-300, 1e-8, 0.01, 0.3, 0.5, 0.77, 0.999}) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 * p + 1e-300) << p;
  }
  EXPECT_EQ(code_of([] { normal_quantile(0.0); }), errc::invalid_argument);
}

TEST(Moments, MeanAndVariance) {
  const std::vector<double> xs{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(sample_mean(xs), 2.5);
  EXPECT_DOUBLE_EQ(sample_variance(xs), 5.0 / 3.0);
  // large offset: the two-pass form keeps full precision
  const std::vector<double> shifted{1e9 + 1, 1e9 + 2, 1e9 + 3, 1e9 + 4};
  EXPECT_DOUBLE_EQ(sample_variance(shifted), 5.0 / 3.0);
  EXPECT_EQ(code_of([] { sample_mean(std::vector<double>{}); }), errc::empty_sample);
}

TEST(QuantileFrequencies, TailConvention) {
  const std::vector<double> xs{-3, -1.5, -0.5, 0.2, 0.9, 2.5};
  const auto q = quantile_frequencies(xs, standard_cutpoints());
  ASSERT_EQ(q.size(), 7u);
  EXPECT_DOUBLE_EQ(q[0].cutpoint, -1.96);
  EXPECT_NEAR(q[0].percent, 100.0 / 6, 1e-12);  // lower tail below -1.96
  EXPECT_NEAR(q[3].percent, 50.0, 1e-12);       // at zero: lower tail
  EXPECT_NEAR(q[6].percent, 100.0 / 6, 1e-12);  // upper tail above 1.96
  for (const auto& f : q) EXPECT_NEAR(f.percent_below + f.percent_above, 100.0, 1e-12);
  EXPECT_TRUE(quantile_frequencies(xs, {}).empty());
  EXPECT_EQ(code_of([] { quantile_frequencies(std::vector<double>{}, standard_cutpoints()); }),
            errc::empty_sample);
}

TEST(ShapiroWilk, MatchesReference) {
  for (const auto& c : sw_cases()) {
    const auto r = shapiro_wilk(c.x);
    EXPECT_NEAR(r.w, c.w, 1e-5) << c.name;
    EXPECT_NEAR(r.p, c.p, 1e-3 * c.p + 1e-12) << c.name;
  }
}

TEST(ShapiroWilk, EquallySpacedTriple) {
  const auto r = shapiro_wilk(std::vector<double>{1, 2, 3});
  EXPECT_NEAR(r.w, 1.0, 1e-12);
  EXPECT_NEAR(r.p, 1.0, 1e-9);
}

TEST(ShapiroWilk, InvariantUnderAffineMaps) {
  const auto c = sw_cases()[4];
  std::vector<double> y;
  for (double x : c.x) y.push_back(3.5 - 2.0 * x);
  EXPECT_NEAR(shapiro_wilk(y).w, shapiro_wilk(c.x).w, 1e-12);
}

TEST(ShapiroWilk, Errors) {
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>{1, 2}); }), errc::sample_size_out_of_range);
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>(5001, 1.0)); }),
            errc::sample_size_out_of_range);
  EXPECT_EQ(code_of([] { shapiro_wilk(std::vector<double>{2, 2, 2, 2}); }), errc::degenerate_sample);
}
