#include "windings/samplers.hpp"

#include <boost/random/gamma_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace windings {

double sample_gamma_half(RngStream& rng) {
  const double n = rng.normal();
  return 0.5 * n * n;
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
  boost::random::gamma_distribution<double> dist(shape, 1.0);
  return dist(rng);
}

double sample_cauchy(double c, RngStream& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("sample_cauchy: c must be positive");
  return c * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
}

double sample_basic(BasicLaw law, const BasicParams& params, RngStream& rng) {
  if (!(params.scale > 0.0)) throw std::invalid_argument("sample_basic: scale must be positive");
  switch (law) {
    case BasicLaw::normal:
      return params.scale * rng.normal();
    case BasicLaw::exponential:
      return rng.exponential() / params.scale;
    case BasicLaw::gamma_half:
      return sample_gamma_half(rng);
    case BasicLaw::cauchy:
      return sample_cauchy(params.scale, rng);
    case BasicLaw::uniform:
      return rng.uniform();
  }
  throw std::invalid_argument("sample_basic: unknown law");
}

double sample_K(const GgcSpec& spec, RngStream& rng) {
  double k = spec.has_gamma_half ? sample_gamma_half(rng) : 0.0;
  for (double a : spec.coeffs) k += rng.exponential() / a;
  return k;
}

double sample_X2c(double c, RngStream& rng) {
  const double m = barrier_exponent(c);
  const double rounded = std::round(m);
  if (rounded < 1.0 || std::abs(m - rounded) > 1e-9) {
    throw std::invalid_argument("sample_X2c: pi/(2c) must be a positive integer");
  }
  const GgcSpec spec = ggc_coeffs(static_cast<int>(rounded));
  return sample_gamma_half(rng) + sample_K(spec, rng);
}

double sample_first_passage(double h, RngStream& rng) {
  if (!(h > 0.0)) throw std::invalid_argument("sample_first_passage: h must be positive");
  double n = 0.0;
  while (n == 0.0) n = rng.normal();
  return h * h / (n * n);
}

YorParams make_yor_params(double lambda, double nu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("make_yor_params: lambda must be positive");
  YorParams p;
  p.lambda = lambda;
  p.nu = nu;
  p.a = 0.5 * nu + 0.5 * std::sqrt(2.0 * lambda + nu * nu);
  p.b = p.a - nu;
  return p;
}

double sample_yor_rhs(const YorParams& p, RngStream& rng) {
  if (!(p.a > 0.0 && p.b > 0.0)) throw std::invalid_argument("sample_yor_rhs: invalid parameters");
  const double beta_part = -std::expm1(std::log(rng.uniform()) / p.a);
  return beta_part / (2.0 * sample_gamma(p.b, rng));
}

McEstimate biased_expectation(std::span<const double> samples, double u,
                              const std::function<double(double)>& payoff) {
  if (samples.size() < 2) throw std::invalid_argument("biased_expectation: need >= 2 samples");
  // Weights are scaled by the largest log-weight to stay finite.
  double max_log_w = -INFINITY;
  for (double x : samples) {
    if (!(x > 0.0)) throw std::invalid_argument("biased_expectation: samples must be positive");
    max_log_w = std::max(max_log_w, u * std::log(x));
  }
  double sw = 0.0;
  double swy = 0.0;
  std::vector<double> w(samples.size());
  std::vector<double> y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w[i] = std::exp(u * std::log(samples[i]) - max_log_w);
    y[i] = payoff(samples[i]);
    sw += w[i];
    swy += w[i] * y[i];
  }
  if (!(sw > 0.0)) throw std::invalid_argument("biased_expectation: degenerate weights");
  const double ratio = swy / sw;
  const double n = static_cast<double>(samples.size());
  const double wbar = sw / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double r = w[i] * (y[i] - ratio);
    ss += r * r;
  }
  McEstimate est;
  est.mean = ratio;
  est.std_error = std::sqrt(ss / (n * (n - 1.0))) / wbar;
  est.n = samples.size();
  return est;
}

double biased_effective_size(std::span<const double> samples, double u) {
  double max_log_w = -INFINITY;
  for (double x : samples) max_log_w = std::max(max_log_w, u * std::log(x));
  double sw = 0.0;
  double sw2 = 0.0;
  for (double x : samples) {
    const double w = std::exp(u * std::log(x) - max_log_w);
    sw += w;
    sw2 += w * w;
  }
  return sw2 > 0.0 ? sw * sw / sw2 : 0.0;
}

double sample_stable_subordinator_increment(double alpha_half, double dt, RngStream& rng) {
  if (!(alpha_half > 0.0 && alpha_half < 1.0)) {
    throw std::invalid_argument("sample_stable_subordinator_increment: alpha_half must lie in (0,1)");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("sample_stable_subordinator_increment: dt must be positive");
  const double b = alpha_half;
  const double pu = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  // Kanter: S = (A(U) / E)^{(1-b)/b},
  // A(u) = sin(b pi u)^{b/(1-b)} sin((1-b) pi u) / sin(pi u)^{1/(1-b)}.
  // Evaluated in logs, the powers blow up as b -> 1.
  const double log_a = b / (1.0 - b) * std::log(std::sin(b * pu)) +
                       std::log(std::sin((1.0 - b) * pu)) -
                       std::log(std::sin(pu)) / (1.0 - b);
  const double log_s = (1.0 - b) / b * (log_a - std::log(e));
  return std::exp(log_s + std::log(dt) / b);
}

}  // namespace windings
