#include <gtest/gtest.h>

#include <cmath>

#include "lpp/rng.hpp"
#include "lpp/stats.hpp"

namespace lpp::stats {
namespace {

std::vector<double> gamma_sample(int shape, double rate, std::size_t count, std::uint64_t seed) {
  CounterStream rng(seed, Stream::kTest);
  std::vector<double> x(count);
  for (double& v : x) {
    v = 0.0;
    for (int k = 0; k < shape; ++k) v += rng.exponential(rate);
  }
  return x;
}

TEST(Moments, GammaVarianceStandardErrorMatchesClosedForm) {
  const int k = 3;
  const double rate = 2.0;
  const std::size_t n = 100000;
  const Moments m = moments(gamma_sample(k, rate, n, 1));
  const double var = k / (rate * rate);
  const double mu4 = 3.0 * k * (k + 2) / std::pow(rate, 4);
  const double nn = static_cast<double>(n);
  const double se = std::sqrt((mu4 - (nn - 3.0) / (nn - 1.0) * var * var) / nn);
  EXPECT_NEAR(m.variance, var, 4.0 * se);
  EXPECT_NEAR(m.se_variance, se, 0.05 * se);
  EXPECT_NEAR(m.mean, k / rate, 4.0 * m.se_mean);
}

TEST(Moments, VarianceSpreadAcrossRepetitionsMatchesSe) {
  std::vector<double> variances;
  double se_sum = 0.0;
  for (std::uint64_t r = 0; r < 400; ++r) {
    const Moments m = moments(gamma_sample(2, 1.0, 2000, 100 + r));
    variances.push_back(m.variance);
    se_sum += m.se_variance;
  }
  const double spread = std::sqrt(moments(variances).variance);
  EXPECT_NEAR(spread, se_sum / 400.0, 0.12 * spread);
}

TEST(Moments, RejectsTinySamples) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(moments(one), std::invalid_argument);
}

TEST(Jackknife, MeanMatchesAnalyticSe) {
  const std::vector<double> x = gamma_sample(1, 1.0, 20000, 5);
  const double jk = jackknife_se(x, [](std::span<const double> s) { return mean(s); }, 100);
  EXPECT_NEAR(jk, moments(x).se_mean, 0.2 * moments(x).se_mean);
}

TEST(Quantile, Type7) {
  const std::vector<double> x{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
}

TEST(KolmogorovQ, KnownValues) {
  EXPECT_NEAR(kolmogorov_q(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_q(1.6276), 0.01, 1e-4);
  EXPECT_EQ(kolmogorov_q(0.0), 1.0);
}

TEST(Ks, SelfCalibration) {
  int passes = 0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    if (ks_exponential(gamma_sample(1, 0.7, 200, 1000 + r), 0.7).passes(0.01)) ++passes;
  }
  // Expected 990; binomial sd is about 3.
  EXPECT_GE(passes, 975);
  EXPECT_LE(passes, 1000);
}

TEST(Ks, ConstantSampleRejected) {
  const std::vector<double> x(100, 1.0);
  EXPECT_LT(ks_exponential(x, 1.0).p_value, 1e-6);
}

TEST(Ks, IdenticalSamplesHaveZeroStatistic) {
  const std::vector<double> x = gamma_sample(1, 1.0, 50, 3);
  const KsResult r = ks_two_sample(x, x);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Ks, TwoSampleDetectsShift) {
  std::vector<double> b = gamma_sample(1, 1.0, 2000, 8);
  for (double& v : b) v += 0.3;
  EXPECT_LT(ks_two_sample(gamma_sample(1, 1.0, 2000, 7), b).p_value, 1e-6);
}

TEST(Ks, TwoSampleDiscreteTies) {
  const std::vector<double> a{1, 1, 2, 2, 3, 3, 4, 4};
  const std::vector<double> b{1, 2, 3, 4, 1, 2, 3, 4};
  EXPECT_EQ(ks_two_sample(a, b).statistic, 0.0);
}

TEST(Ks, RejectsSmallSamples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(ks_exponential(x, 1.0), std::invalid_argument);
}

TEST(WeightedFit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const std::vector<double> s{0.1, 0.1, 0.1, 0.1};
  const LinearFit f = weighted_fit(x, y, s);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.chi2, 0.0, 1e-18);
  // se = sigma / sqrt(Sxx) with Sxx = 5
  EXPECT_NEAR(f.se_slope, 0.1 / std::sqrt(5.0), 1e-12);
  EXPECT_LT(f.ci_low, 2.0);
  EXPECT_GT(f.ci_high, 2.0);
}

TEST(WeightedFit, InflatesForPoorFit) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{0, 2, 0, 2};
  const std::vector<double> s{0.1, 0.1, 0.1, 0.1};
  const LinearFit f = weighted_fit(x, y, s);
  EXPECT_GT(f.se_slope, 0.1 / std::sqrt(5.0) * 5.0);
}

TEST(Proportion, WilsonInterval) {
  const Proportion p = proportion(0, 100);
  EXPECT_EQ(p.lower, 0.0);
  EXPECT_NEAR(p.upper, 0.037, 0.001);
  const Proportion q = proportion(50, 100);
  EXPECT_NEAR(q.lower, 0.4038, 1e-3);
  EXPECT_NEAR(q.upper, 0.5962, 1e-3);
  EXPECT_THROW(proportion(1, 0), std::invalid_argument);
}

TEST(Pearson, PerfectAndNone) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{2, 4, 6, 8};
  EXPECT_NEAR(pearson(x, y), 1.0, 1e-12);
  const std::vector<double> c{1, 1, 1, 1};
  EXPECT_EQ(pearson(x, c), 0.0);
}

}  // namespace
}  // namespace lpp::stats
