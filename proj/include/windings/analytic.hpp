#pragma once

// Closed-form laws and deterministic quadratures for planar windings,
// cone exit times and exponential functionals of Brownian motion.
//
// Everything here is pure and reentrant. These functions are the oracle
// side of the Monte Carlo checks in verify.hpp, so they never touch an RNG.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace windings {

// phi(x) = log^2(sqrt(x) + sqrt(1 + x)) = asinh^2(sqrt(x)).
double phi(double x);

// First derivative asinh(sqrt(x)) / sqrt(x (1 + x)); x > 0.
double phi_prime(double x);

// f_m(x) = 2 / ((sqrt(1+x)+sqrt(x))^m + (sqrt(1+x)-sqrt(x))^m).
//
// Switches to the dominant-term form once the first power would overflow.
double f_m(double x, double m);

// Truncated product prod_{k<=terms} (1 + x^2 / d_k), d_k = (pi (2k-1) / 2)^2.
double cosh_product(double x, std::size_t terms);

// Same product, stopped once a factor moves it by less than rel_stop.
double cosh_product(double x, double rel_stop = 1e-14);

// d_k of the product above, k >= 1.
double cosh_product_node(std::size_t k);

enum class PsiKind { one, two };

// psi_1(x; c) = log(1 + phi(x)/c^2), psi_2(x; m) = log cosh(m sqrt(phi(x))).
// `param` is c for PsiKind::one and m for PsiKind::two.
double psi(double x, PsiKind kind, double param);

enum class GltKind { single, double_barrier, dufresne };

struct GltParams {
  double c = 1.0;  // barrier, single and double kinds
  double t = 1.0;  // horizon, dufresne kind
};

// Right-hand sides of the Gauss-Laplace transforms:
//   single:   (1+x)^{-1/2} c^2 / (c^2 + phi(x))
//   double:   (1+x)^{-1/2} f_m(x),  m = pi / (2c)
//   dufresne: (2 pi t)^{-1/2} (1+x)^{-1/2} exp(-phi(x) / (2t))
double glt_rhs(GltKind kind, double x, const GltParams& params);

// m = pi / (2c), the cosh exponent paired with a double barrier at +-c.
double barrier_exponent(double c);

enum class DensityKind { cauchy, sinh_cauchy, cosh_barrier };

// h_c(y), (1+y^2)^{-1/2} h_c(asinh y), or 1 / (2c cosh(m y)), m = pi / (2c).
double density(DensityKind kind, double y, double c);

enum class Parity { odd, even };

// Discrete GGC representation of the variable K whose Laplace transform is
// f_m for integer m:  K = [G_{1/2}] + sum_k e_k / coeffs[k].
struct GgcSpec {
  int m = 1;
  Parity parity = Parity::odd;
  std::vector<double> coeffs;  // strictly increasing, in (0, 1)
  bool has_gamma_half = true;
};

GgcSpec ggc_coeffs(int m);

// prod_k (1 + x/coeff_k)^{-1} (1+x)^{-1/2 [has_gamma_half]}.
double ggc_laplace(const GgcSpec& spec, double x);

// Density of the Levy measure of K: (1/z) sum_k exp(-coeff_k z).
double levy_density(double z, const GgcSpec& spec);

// P(T_h <= u) for the first passage of a standard Brownian motion at h.
double first_passage_cdf(double h, double u);

// (2 sqrt(u) / log t) exp(-(log t)^2 / (8u)), the companion bound used for
// the decay of the Bessel clock distribution; t > 1.
double deblassie_bound(double t, double u);

// Median of N^2 for standard normal N (chi-square with one degree of freedom).
inline constexpr double kMedianChiSquare1 = 0.454936423119572694;

// Constants of the isotropic stable winding asymptotics.
struct ConeConstants {
  double alpha = 1.0;
  double integral = 0.0;  // int_C |z|^{-2-alpha} |omega(1+z)|^2 dz
  double r_alpha = 0.0;
  double k_alpha = 0.0;
  double quad_error = 0.0;
};

// Evaluates the planar integral by polar quadrature and derives r and k.
// Throws std::domain_error for alpha outside (0, 2) and std::runtime_error
// if the refinement does not reach `tol` relative change.
ConeConstants cone_constants(double alpha, double tol = 1e-10);

// 2^alpha Gamma(1 + alpha/2) / Gamma(1 - alpha/2).
double cone_ratio(double alpha);

// Angular part of the cone integral: int_{-pi}^{pi} omega(1 + r e^{i t})^2 dt.
double cone_angular_integral(double r, std::size_t panels_per_level = 1);

// Numeric probe of the Laplace representation of phi'/phi.
struct LogDerivPoint {
  double x = 0.0;
  double exact = 0.0;          // phi'(x) / phi(x)
  double via_kernel = 0.0;     // Laplace transform of logderiv_kernel
  double via_printed = 0.0;    // Laplace transform of logderiv_kernel_printed
  double rel_err_kernel = 0.0;
  double rel_err_printed = 0.0;
  bool quad_ok = true;
};

struct MonotonicityPoint {
  double u = 0.0;
  double step = 0.0;
  std::vector<double> signed_differences;  // (-1)^n Delta^n f(u), n = 1..6
  std::vector<bool> resolved;              // difference above noise floor
  int first_violation = 0;                 // smallest resolved n with a negative entry, 0 if none
};

struct LogDerivProbe {
  std::vector<LogDerivPoint> points;
  std::vector<MonotonicityPoint> monotonicity;
  double max_rel_err_kernel = 0.0;
  double max_rel_err_printed = 0.0;
  int quad_failures = 0;
};

// 2 exp(-u/2) int_0^inf I_nu(u/2) dnu, the kernel whose Laplace transform is
// phi'/phi.
double logderiv_kernel(double u, double tol = 1e-12);

// exp(-u/2) (cosh(u/2) + int_0^inf I_nu(u/2) dnu), the form found in the
// literature. Kept for the comparison reported by the probe.
double logderiv_kernel_printed(double u, double tol = 1e-12);

// Monotonicity evidence is gathered at `cm_points` on logderiv_kernel. This is
// exploratory: it never proves or refutes complete monotonicity.
LogDerivProbe phi_logderiv_probe(std::span<const double> x_grid, double quad_tol,
                                 std::span<const double> cm_points = {});

}  // namespace windings
