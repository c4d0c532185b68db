#pragma once

// Estimators and goodness-of-fit tests used by the experiments.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace lpp::stats {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;     // unbiased
  double m4 = 0.0;           // central fourth moment (plug-in)
  double se_mean = 0.0;
  double se_variance = 0.0;  // from the fourth central moment
};

/// Sample mean and variance with standard errors. The variance SE uses
/// Var(s^2) ~ (mu4 - (n-3)/(n-1) sigma^4) / n.
inline Moments moments(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("moments need at least two samples");
  Moments r;
  r.count = n;
  // Two-pass; sums are accumulated in index order so results are reproducible.
  double s = 0.0;
  for (double v : x) s += v;
  r.mean = s / static_cast<double>(n);
  double s2 = 0.0, s4 = 0.0;
  for (double v : x) {
    const double d = v - r.mean;
    const double d2 = d * d;
    s2 += d2;
    s4 += d2 * d2;
  }
  const double nn = static_cast<double>(n);
  r.variance = s2 / (nn - 1.0);
  r.m4 = s4 / nn;
  r.se_mean = std::sqrt(r.variance / nn);
  const double var_of_var = (r.m4 - (nn - 3.0) / (nn - 1.0) * r.variance * r.variance) / nn;
  r.se_variance = std::sqrt(std::max(var_of_var, 0.0));
  return r;
}

inline double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Delete-a-group jackknife standard error of a statistic. Samples are split
/// into `groups` contiguous blocks.
inline double jackknife_se(std::span<const double> x, const std::function<double(std::span<const double>)>& stat,
                           std::size_t groups = 50) {
  const std::size_t n = x.size();
  if (groups < 2 || n < 2 * groups) throw std::invalid_argument("jackknife needs at least two samples per group");
  std::vector<double> pseudo(groups);
  std::vector<double> rest;
  rest.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * n / groups;
    const std::size_t hi = (g + 1) * n / groups;
    rest.clear();
    rest.insert(rest.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(lo));
    rest.insert(rest.end(), x.begin() + static_cast<std::ptrdiff_t>(hi), x.end());
    pseudo[g] = stat(rest);
  }
  const double avg = mean(pseudo);
  double ss = 0.0;
  for (double v : pseudo) ss += (v - avg) * (v - avg);
  const double gg = static_cast<double>(groups);
  return std::sqrt((gg - 1.0) / gg * ss);
}

/// Delete-a-group jackknife for statistics of paired or multi-column data:
/// `leave_out(lo, hi)` must return the statistic computed without samples
/// [lo, hi).
inline double jackknife_se_indexed(std::size_t n, std::size_t groups,
                                   const std::function<double(std::size_t, std::size_t)>& leave_out) {
  if (groups < 2 || n < 2 * groups) throw std::invalid_argument("jackknife needs at least two samples per group");
  std::vector<double> pseudo(groups);
  for (std::size_t g = 0; g < groups; ++g) pseudo[g] = leave_out(g * n / groups, (g + 1) * n / groups);
  const double avg = mean(pseudo);
  double ss = 0.0;
  for (double v : pseudo) ss += (v - avg) * (v - avg);
  const double gg = static_cast<double>(groups);
  return std::sqrt((gg - 1.0) / gg * ss);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("correlation needs equal-length samples");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Type-7 sample quantile (linear interpolation), q in [0, 1].
inline double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov.

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1.1e-16) return 1.0;
  if (lambda < 0.3) return 1.0;  // series converges slowly here and Q > 0.9999
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;   // sup |F_1 - F_2|
  double p_value = 1.0;     // asymptotic, with Stephens' small-sample correction
  double effective_n = 0.0;
  bool passes(double level) const noexcept { return p_value > level; }
};

inline KsResult ks_from_statistic(double d, double ne) {
  const double root = std::sqrt(ne);
  return {d, kolmogorov_q((root + 0.12 + 0.11 / root) * d), ne};
}

inline constexpr std::size_t kKsMinSamples = 8;

/// One-sample test against a continuous CDF.
inline KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.size() < kKsMinSamples) throw std::invalid_argument("KS test needs at least 8 samples");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = cdf(x[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return ks_from_statistic(d, n);
}

inline KsResult ks_exponential(std::vector<double> x, double rate) {
  return ks_one_sample(std::move(x), [rate](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-rate * v); });
}

/// Two-sample test. Ties (including discrete data) are handled by advancing
/// both empirical CDFs past equal values before comparing.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < kKsMinSamples || b.size() < kKsMinSamples) {
    throw std::invalid_argument("KS test needs at least 8 samples per group");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double v = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] == v) ++ia;
    while (ib < b.size() && b[ib] == v) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return ks_from_statistic(d, na * nb / (na + nb));
}

// ---------------------------------------------------------------------------
// Regression.

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se_slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double chi2 = 0.0;
  std::size_t dof = 0;
};

/// Weighted least squares of y on x with known standard errors sigma. The
/// slope error is inflated by sqrt(chi2/dof) when the fit is worse than the
/// stated errors allow. The confidence interval is slope +- z * se.
inline LinearFit weighted_fit(std::span<const double> x, std::span<const double> y, std::span<const double> sigma,
                              double z = 1.959963984540054) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n || sigma.size() != n) throw std::invalid_argument("regression needs at least 3 points");
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(sigma[k] > 0.0)) throw std::invalid_argument("regression errors must be positive");
    const double w = 1.0 / (sigma[k] * sigma[k]);
    sw += w;
    swx += w * x[k];
    swy += w * y[k];
    swxx += w * x[k] * x[k];
    swxy += w * x[k] * y[k];
  }
  const double det = sw * swxx - swx * swx;
  LinearFit f;
  f.slope = (sw * swxy - swx * swy) / det;
  f.intercept = (swxx * swy - swx * swxy) / det;
  f.dof = n - 2;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = (y[k] - f.intercept - f.slope * x[k]) / sigma[k];
    f.chi2 += r * r;
  }
  const double inflation = std::max(1.0, std::sqrt(f.chi2 / static_cast<double>(f.dof)));
  f.se_slope = std::sqrt(sw / det) * inflation;
  f.ci_low = f.slope - z * f.se_slope;
  f.ci_high = f.slope + z * f.se_slope;
  return f;
}

// ---------------------------------------------------------------------------
// Binomial proportions.

struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double se = 0.0;     // sqrt(p(1-p)/N)
  double lower = 0.0;  // Wilson score interval
  double upper = 0.0;
};

inline Proportion proportion(std::size_t hits, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) throw std::invalid_argument("proportion of zero trials");
  Proportion p;
  p.hits = hits;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  p.estimate = static_cast<double>(hits) / n;
  p.se = std::sqrt(p.estimate * (1.0 - p.estimate) / n);
  const double z2 = z * z;
  const double centre = (p.estimate + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p.estimate * (1.0 - p.estimate) / n + z2 / (4.0 * n * n));
  p.lower = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  p.upper = hits == trials ? 1.0 : std::min(1.0, centre + half);
  return p;
}

}  // namespace lpp::stats
