#pragma once

// Exact (non-path) generators for the closed-form laws: Gaussian, Gamma(1/2),
// Cauchy, first passage times, the GGC variable K, and the one-sided stable
// subordinator used to build isotropic stable increments.

#include "windings/analytic.hpp"
#include "windings/rng.hpp"
#include "windings/stats.hpp"

#include <functional>
#include <span>

namespace windings {

enum class BasicLaw { normal, exponential, gamma_half, cauchy, uniform };

// `scale` is the standard deviation (normal), the rate (exponential), the
// Cauchy parameter c, or ignored (gamma_half: Gamma(1/2, 1), uniform: (0,1)).
struct BasicParams {
  double scale = 1.0;
};

double sample_basic(BasicLaw law, const BasicParams& params, RngStream& rng);

// Gamma(1/2, 1) as N^2 / 2.
double sample_gamma_half(RngStream& rng);

// Gamma(shape, 1) for any positive shape.
double sample_gamma(double shape, RngStream& rng);

double sample_cauchy(double c, RngStream& rng);

// K = [G_{1/2}] + sum_k e_k / coeff_k.
double sample_K(const GgcSpec& spec, RngStream& rng);

// X_{2,c} = G'_{1/2} + K with m = pi/(2c). Throws std::invalid_argument when
// m is not an integer (to 1e-9).
double sample_X2c(double c, RngStream& rng);

// First passage time of a standard Brownian motion at h: h^2 / N^2.
double sample_first_passage(double h, RngStream& rng);

struct YorParams {
  double lambda = 1.0;
  double nu = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// a = nu/2 + sqrt(2 lambda + nu^2)/2, b = a - nu.
YorParams make_yor_params(double lambda, double nu);

// (1 - U^{1/a}) / (2 G_b), the exact law of int_0^{T_lambda} exp(2(beta_s + nu s)) ds.
double sample_yor_rhs(const YorParams& p, RngStream& rng);

// Expectation of `payoff` under the length-biased law x^u P(X in dx) / E[X^u],
// estimated by reweighting plain samples of X. The standard error is the
// delta-method error of the ratio estimator.
McEstimate biased_expectation(std::span<const double> samples, double u,
                              const std::function<double(double)>& payoff);

// Kish effective sample size of the weights x_i^u.
double biased_effective_size(std::span<const double> samples, double u);

// Positive stable variate with E[exp(-l S)] = exp(-dt l^alpha_half), via
// Kanter's representation. 0 < alpha_half < 1.
double sample_stable_subordinator_increment(double alpha_half, double dt, RngStream& rng);

}  // namespace windings
