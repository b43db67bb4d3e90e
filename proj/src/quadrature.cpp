#include "windings/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace windings::quad {

double gauss_legendre(const Integrand& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

double gauss_legendre_composite(const Integrand& f, std::span<const double> breaks) {
  double sum = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    sum += gauss_legendre(f, breaks[i - 1], breaks[i]);
  }
  return sum;
}

Result adaptive(const Integrand& f, double a, double b, double tol) {
  Result r;
  try {
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol,
                                                                            &r.error);
  } catch (const std::exception&) {
    r.converged = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.converged = std::isfinite(r.value) && r.error <= std::max(tol * std::abs(r.value), tol) * 10;
  return r;
}

Result endpoint_singular(const Integrand& f, double a, double b, double tol) {
  Result r;
  try {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double l1 = 0.0;
    r.value = integrator.integrate(f, a, b, tol, &r.error, &l1);
  } catch (const std::exception&) {
    r.converged = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.converged = std::isfinite(r.value) && r.error <= std::max(tol * std::abs(r.value), tol) * 10;
  return r;
}

Result half_line(const Integrand& f, double a, double tol) {
  Result r;
  try {
    boost::math::quadrature::exp_sinh<double> integrator;
    double l1 = 0.0;
    r.value = integrator.integrate([&](double t) { return f(a + t); }, tol, &r.error, &l1);
  } catch (const std::exception&) {
    r.converged = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.converged = std::isfinite(r.value) && r.error <= std::max(tol * std::abs(r.value), tol) * 10;
  return r;
}

void graded_breaks(double a, double b, int levels, int split, std::vector<double>& out) {
  out.clear();
  out.push_back(a);
  double left = a;
  for (int level = 0; level < levels; ++level) {
    const double right = b - (b - a) * std::ldexp(1.0, -(level + 1));
    for (int s = 1; s <= split; ++s) {
      out.push_back(left + (right - left) * s / split);
    }
    left = right;
  }
  for (int s = 1; s <= split; ++s) {
    out.push_back(left + (b - left) * s / split);
  }
}

}  // namespace windings::quad
