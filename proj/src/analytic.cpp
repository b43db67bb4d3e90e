#include "windings/analytic.hpp"

#include "windings/quadrature.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace windings {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(what) + " must be nonnegative");
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
}

// log(sqrt(x) + sqrt(1+x)) without cancellation or overflow.
double log_root_sum(double x) { return std::asinh(std::sqrt(x)); }

}  // namespace

double phi(double x) {
  require_nonnegative(x, "phi: x");
  const double s = log_root_sum(x);
  return s * s;
}

double phi_prime(double x) {
  require_positive(x, "phi_prime: x");
  return log_root_sum(x) / std::sqrt(x * (1.0 + x));
}

double f_m(double x, double m) {
  require_nonnegative(x, "f_m: x");
  require_positive(m, "f_m: m");
  const double log_a = log_root_sum(x);
  if (m * log_a < 600.0) {
    const double a = std::sqrt(1.0 + x) + std::sqrt(x);
    return 2.0 / (std::pow(a, m) + std::pow(a, -m));
  }
  const double q = std::exp(-m * log_a);
  return 2.0 * q / (1.0 + q * q);
}

double cosh_product_node(std::size_t k) {
  if (k == 0) throw std::domain_error("cosh_product_node: k starts at 1");
  const double half = 0.5 * kPi * (2.0 * static_cast<double>(k) - 1.0);
  return half * half;
}

double cosh_product(double x, std::size_t terms) {
  if (terms == 0) throw std::domain_error("cosh_product: terms must be >= 1");
  const double x2 = x * x;
  double prod = 1.0;
  for (std::size_t k = 1; k <= terms; ++k) {
    prod *= 1.0 + x2 / cosh_product_node(k);
  }
  return prod;
}

double cosh_product(double x, double rel_stop) {
  require_positive(rel_stop, "cosh_product: rel_stop");
  const double x2 = x * x;
  double prod = 1.0;
  constexpr std::size_t kMaxTerms = 100'000'000;
  for (std::size_t k = 1; k <= kMaxTerms; ++k) {
    const double factor = x2 / cosh_product_node(k);
    prod *= 1.0 + factor;
    if (factor < rel_stop) break;
  }
  return prod;
}

double psi(double x, PsiKind kind, double param) {
  require_nonnegative(x, "psi: x");
  require_positive(param, "psi: parameter");
  if (kind == PsiKind::one) {
    return std::log1p(phi(x) / (param * param));
  }
  // log cosh(y) = y + log1p(exp(-2y)) - log 2, stable for every y >= 0.
  const double y = param * log_root_sum(x);
  return y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
}

double barrier_exponent(double c) {
  require_positive(c, "barrier_exponent: c");
  return kPi / (2.0 * c);
}

double glt_rhs(GltKind kind, double x, const GltParams& params) {
  require_nonnegative(x, "glt_rhs: x");
  const double root = 1.0 / std::sqrt(1.0 + x);
  switch (kind) {
    case GltKind::single: {
      require_positive(params.c, "glt_rhs: c");
      const double c2 = params.c * params.c;
      return root * c2 / (c2 + phi(x));
    }
    case GltKind::double_barrier:
      return root * f_m(x, barrier_exponent(params.c));
    case GltKind::dufresne:
      require_positive(params.t, "glt_rhs: t");
      return root * std::exp(-phi(x) / (2.0 * params.t)) / std::sqrt(2.0 * kPi * params.t);
  }
  throw std::invalid_argument("glt_rhs: unknown kind");
}

double density(DensityKind kind, double y, double c) {
  require_positive(c, "density: c");
  const auto cauchy = [c](double v) { return c / (kPi * (c * c + v * v)); };
  switch (kind) {
    case DensityKind::cauchy:
      return cauchy(y);
    case DensityKind::sinh_cauchy:
      return cauchy(std::asinh(y)) / std::sqrt(1.0 + y * y);
    case DensityKind::cosh_barrier:
      return 1.0 / (2.0 * c * std::cosh(barrier_exponent(c) * y));
  }
  throw std::invalid_argument("density: unknown kind");
}

GgcSpec ggc_coeffs(int m) {
  if (m < 1) throw std::domain_error("ggc_coeffs: m must be >= 1");
  GgcSpec spec;
  spec.m = m;
  spec.parity = (m % 2 == 1) ? Parity::odd : Parity::even;
  spec.has_gamma_half = spec.parity == Parity::odd;
  const int n = m / 2;
  spec.coeffs.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin(0.5 * kPi * (2.0 * k - 1.0) / m);
    spec.coeffs.push_back(s * s);
  }
  return spec;
}

double ggc_laplace(const GgcSpec& spec, double x) {
  require_nonnegative(x, "ggc_laplace: x");
  double value = spec.has_gamma_half ? 1.0 / std::sqrt(1.0 + x) : 1.0;
  for (double a : spec.coeffs) value /= 1.0 + x / a;
  return value;
}

double levy_density(double z, const GgcSpec& spec) {
  require_positive(z, "levy_density: z");
  double sum = 0.0;
  for (double a : spec.coeffs) sum += std::exp(-a * z);
  return sum / z;
}

double first_passage_cdf(double h, double u) {
  require_positive(h, "first_passage_cdf: h");
  require_positive(u, "first_passage_cdf: u");
  return std::erfc(h / std::sqrt(2.0 * u));
}

double deblassie_bound(double t, double u) {
  require_positive(u, "deblassie_bound: u");
  if (!(t > 1.0)) throw std::domain_error("deblassie_bound: t must exceed 1");
  const double lt = std::log(t);
  return 2.0 * std::sqrt(u) / lt * std::exp(-lt * lt / (8.0 * u));
}

// ---------------------------------------------------------------------------
// Cone constants

double cone_ratio(double alpha) {
  return std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) / std::tgamma(1.0 - 0.5 * alpha);
}

double cone_angular_integral(double r, std::size_t panels_per_level) {
  // The integrand is even in the angle; for r near 1 it steepens at +-pi, so
  // the panels are graded toward pi.
  std::vector<double> breaks;
  quad::graded_breaks(0.0, kPi, 44, static_cast<int>(panels_per_level), breaks);
  const auto integrand = [r](double t) {
    const double w = std::atan2(r * std::sin(t), 1.0 + r * std::cos(t));
    return w * w;
  };
  return 2.0 * quad::gauss_legendre_composite(integrand, breaks);
}

namespace {

// int_{s0}^{s1} e^{-alpha s} g(e^s) ds with graded radial panels toward s = 0,
// where the angular integral has a (1-r) log|1-r| kink.
double radial_integral(double alpha, int split) {
  const double s_min = std::log(1e-6);
  const double s_max = std::log(1e6);
  const auto integrand = [alpha, split](double s) {
    const double r = std::exp(s);
    return std::exp(-alpha * s) * cone_angular_integral(r, static_cast<std::size_t>(split));
  };
  std::vector<double> left;
  std::vector<double> right;
  quad::graded_breaks(s_min, 0.0, 30, split, left);
  quad::graded_breaks(s_max, 0.0, 30, split, right);
  std::reverse(right.begin(), right.end());
  return quad::gauss_legendre_composite(integrand, left) +
         quad::gauss_legendre_composite(integrand, right);
}

// Contributions of r < 1e-6 and r > 1e6 from the leading behaviour of the
// angular integral: pi (r^2 + r^4/4) near 0 and 2 pi^3/3 - 4 pi / r at infinity.
double radial_tails(double alpha) {
  const double eps = 1e-6;
  const double big = 1e6;
  const double small_tail = kPi * (std::pow(eps, 2.0 - alpha) / (2.0 - alpha) +
                                   std::pow(eps, 4.0 - alpha) / (4.0 * (4.0 - alpha)));
  const double large_tail = 2.0 * kPi * kPi * kPi / 3.0 * std::pow(big, -alpha) / alpha -
                            4.0 * kPi * std::pow(big, -1.0 - alpha) / (1.0 + alpha);
  return small_tail + large_tail;
}

}  // namespace

ConeConstants cone_constants(double alpha, double tol) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw std::domain_error("cone_constants: alpha must lie in (0, 2)");
  }
  require_positive(tol, "cone_constants: tol");

  const double tails = radial_tails(alpha);
  double previous = radial_integral(alpha, 1) + tails;
  double current = previous;
  double change = std::numeric_limits<double>::infinity();
  for (int split = 2; split <= 16; split *= 2) {
    current = radial_integral(alpha, split) + tails;
    change = std::abs(current - previous);
    if (change <= tol * std::abs(current)) break;
    previous = current;
  }
  if (!(change <= tol * std::abs(current))) {
    throw std::runtime_error("cone_constants: quadrature did not converge to tol");
  }

  ConeConstants out;
  out.alpha = alpha;
  out.integral = current;
  out.quad_error = change;
  out.r_alpha = alpha * std::pow(2.0, -1.0 - 0.5 * alpha) * current / kPi;
  out.k_alpha = alpha * std::pow(2.0, -1.0 + 0.5 * alpha) * std::tgamma(1.0 + 0.5 * alpha) *
                current / (kPi * std::tgamma(1.0 - 0.5 * alpha));
  return out;
}

// ---------------------------------------------------------------------------
// Logarithmic derivative of phi

namespace {

// int_0^inf e^{-y} I_nu(y) dnu. The integrand decays like exp(-nu^2 / 2y) for
// large y and like (y/2)^nu / Gamma(nu+1) for small y.
quad::Result scaled_order_integral(double y, double tol) {
  if (y == 0.0) return {0.0, 0.0, true};
  const double nu_max = 40.0 + 12.0 * std::sqrt(y);
  const auto integrand = [y](double nu) {
    return boost::math::cyl_bessel_i(nu, y) * std::exp(-y);
  };
  return quad::adaptive(integrand, 0.0, nu_max, tol);
}

double checked(const quad::Result& r) {
  if (!r.converged) throw std::runtime_error("logderiv kernel: inner quadrature failed");
  return r.value;
}

}  // namespace

double logderiv_kernel(double u, double tol) {
  require_nonnegative(u, "logderiv_kernel: u");
  return 2.0 * checked(scaled_order_integral(0.5 * u, tol));
}

double logderiv_kernel_printed(double u, double tol) {
  require_nonnegative(u, "logderiv_kernel_printed: u");
  const double y = 0.5 * u;
  // e^{-y} cosh(y) = (1 + e^{-2y}) / 2
  return 0.5 * (1.0 + std::exp(-2.0 * y)) + checked(scaled_order_integral(y, tol));
}

namespace {

quad::Result laplace_of(double x, double tol, double (*kernel)(double, double)) {
  // Both kernels are bounded by 2, so truncating at U leaves at most 2 e^{-xU}/x.
  const double upper = -std::log(tol * x / 2.0) / x;
  bool ok = true;
  const auto integrand = [&](double u) {
    try {
      return std::exp(-x * u) * kernel(u, tol * 1e-2);
    } catch (const std::runtime_error&) {
      ok = false;
      return 0.0;
    }
  };
  // The kernels behave like 1/log(1/u) at the origin.
  const double split = std::min(1.0, upper);
  quad::Result r = quad::endpoint_singular(integrand, 0.0, split, tol);
  if (upper > split) {
    const quad::Result tail = quad::adaptive(integrand, split, upper, tol);
    r.value += tail.value;
    r.error += tail.error;
    r.converged = r.converged && tail.converged;
  }
  r.converged = r.converged && ok;
  return r;
}

MonotonicityPoint probe_monotonicity(double u, double noise) {
  constexpr int kMaxOrder = 6;
  MonotonicityPoint pt;
  pt.u = u;
  // Truncation error of an n-th difference grows like h, roundoff like noise 2^n / h^n;
  // the step balances the two at the highest order.
  pt.step = std::max(1e-3, std::pow(noise, 1.0 / (kMaxOrder + 1))) * std::max(1.0, u);
  std::vector<double> values;
  for (int j = 0; j <= kMaxOrder; ++j) {
    values.push_back(logderiv_kernel(u + j * pt.step, noise * 1e-2));
  }
  std::vector<double> diff = values;
  for (int order = 1; order <= kMaxOrder; ++order) {
    for (std::size_t j = 0; j + 1 < diff.size(); ++j) diff[j] = diff[j + 1] - diff[j];
    diff.pop_back();
    const double signed_diff = (order % 2 == 0 ? 1.0 : -1.0) * diff.front();
    const bool resolved = std::abs(signed_diff) > noise * std::ldexp(1.0, order);
    pt.signed_differences.push_back(signed_diff);
    pt.resolved.push_back(resolved);
    if (resolved && signed_diff < 0.0 && pt.first_violation == 0) pt.first_violation = order;
  }
  return pt;
}

}  // namespace

LogDerivProbe phi_logderiv_probe(std::span<const double> x_grid, double quad_tol,
                                 std::span<const double> cm_points) {
  if (x_grid.empty()) throw std::invalid_argument("phi_logderiv_probe: empty grid");
  require_positive(quad_tol, "phi_logderiv_probe: quad_tol");
  LogDerivProbe probe;
  for (double x : x_grid) {
    require_positive(x, "phi_logderiv_probe: grid point");
    LogDerivPoint pt;
    pt.x = x;
    pt.exact = phi_prime(x) / phi(x);
    const quad::Result k = laplace_of(x, quad_tol, &logderiv_kernel);
    const quad::Result p = laplace_of(x, quad_tol, &logderiv_kernel_printed);
    pt.quad_ok = k.converged && p.converged;
    if (!pt.quad_ok) ++probe.quad_failures;
    pt.via_kernel = k.value;
    pt.via_printed = p.value;
    pt.rel_err_kernel = std::abs(k.value - pt.exact) / pt.exact;
    pt.rel_err_printed = std::abs(p.value - pt.exact) / pt.exact;
    if (pt.quad_ok) {
      probe.max_rel_err_kernel = std::max(probe.max_rel_err_kernel, pt.rel_err_kernel);
      probe.max_rel_err_printed = std::max(probe.max_rel_err_printed, pt.rel_err_printed);
    }
    probe.points.push_back(pt);
  }
  for (double u : cm_points) {
    try {
      probe.monotonicity.push_back(probe_monotonicity(u, quad_tol));
    } catch (const std::runtime_error&) {
      ++probe.quad_failures;
    }
  }
  return probe;
}

}  // namespace windings
