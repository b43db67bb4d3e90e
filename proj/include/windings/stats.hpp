#pragma once

// Sample summaries and Kolmogorov-Smirnov comparisons.

#include <cstddef>
#include <functional>
#include <span>

namespace windings {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

// Throws std::invalid_argument for fewer than two samples.
McEstimate estimate_mean(std::span<const double> samples);

// |mean - target| <= k * std_error.
bool within_se(const McEstimate& est, double target, double k = 3.0);

// Sample quantile by linear interpolation of the order statistics, p in [0, 1].
double quantile(std::span<const double> samples, double p);
inline double median(std::span<const double> samples) { return quantile(samples, 0.5); }

// Asymptotic Kolmogorov critical coefficient c(level) = sqrt(-log(level/2)/2);
// c(0.05) = 1.358, c(0.01) = 1.628.
double ks_coefficient(double level);

struct KsResult {
  double statistic = 0.0;
  double threshold = 0.0;
  bool rejected() const { return statistic > threshold; }
};

// Two-sample statistic sup |F_a - F_b| with threshold
// inflation * c(level) * sqrt((n + m) / (n m)).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double level = 0.05,
                       double inflation = 1.0);

// One-sample statistic against a continuous CDF; threshold inflation * c(level) / sqrt(n).
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                       double level = 0.05, double inflation = 1.0);

// Weighted empirical CDF against `cdf`; the threshold uses the Kish effective
// sample size in place of n.
KsResult ks_weighted(std::span<const double> samples, std::span<const double> weights,
                     const std::function<double(double)>& cdf, double level = 0.05,
                     double inflation = 1.0);

// Pearson correlation of paired samples.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace windings
