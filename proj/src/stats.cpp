#include "windings/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace windings {

McEstimate estimate_mean(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("estimate_mean: need >= 2 samples");
  const double n = static_cast<double>(samples.size());
  // Two-pass for accuracy; the sum order is the sample order, so results are
  // reproducible for a fixed sample vector.
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  McEstimate est;
  est.mean = mean;
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  est.n = samples.size();
  return est;
}

bool within_se(const McEstimate& est, double target, double k) {
  return std::abs(est.mean - target) <= k * est.std_error;
}

double quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double ks_coefficient(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("ks_coefficient: level in (0,1)");
  return std::sqrt(-0.5 * std::log(0.5 * level));
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double level,
                       double inflation) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KsResult r;
  r.statistic = d;
  r.threshold = inflation * ks_coefficient(level) * std::sqrt((n + m) / (n * m));
  return r;
}

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf,
                       double level, double inflation) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult r;
  r.statistic = d;
  r.threshold = inflation * ks_coefficient(level) / std::sqrt(n);
  return r;
}

KsResult ks_weighted(std::span<const double> samples, std::span<const double> weights,
                     const std::function<double(double)>& cdf, double level, double inflation) {
  if (samples.empty() || samples.size() != weights.size()) {
    throw std::invalid_argument("ks_weighted: samples and weights must be nonempty and paired");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return samples[l] < samples[r]; });
  double total = 0.0;
  double total_sq = 0.0;
  for (double w : weights) {
    total += w;
    total_sq += w * w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("ks_weighted: degenerate weights");
  double cum = 0.0;
  double d = 0.0;
  for (std::size_t idx : order) {
    const double f = cdf(samples[idx]);
    const double before = cum / total;
    cum += weights[idx];
    d = std::max({d, cum / total - f, f - before});
  }
  KsResult r;
  r.statistic = d;
  r.threshold = inflation * ks_coefficient(level) / std::sqrt(total * total / total_sq);
  return r;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation: bad sizes");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace windings
