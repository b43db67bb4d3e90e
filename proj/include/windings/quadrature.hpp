#pragma once

#include <functional>
#include <span>
#include <vector>

namespace windings::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

using Integrand = std::function<double(double)>;

// 20-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const Integrand& f, double a, double b);

// Composite 20-point rule over consecutive breakpoints.
double gauss_legendre_composite(const Integrand& f, std::span<const double> breaks);

// Adaptive Gauss-Kronrod (15/31) on a finite interval.
Result adaptive(const Integrand& f, double a, double b, double tol);

// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
Result endpoint_singular(const Integrand& f, double a, double b, double tol);

// Adaptive integral over [a, inf).
Result half_line(const Integrand& f, double a, double tol);

// Breakpoints a = x_0 < ... < x_n = b refined geometrically toward `b`
// (each level halves the remaining distance).
void graded_breaks(double a, double b, int levels, int split, std::vector<double>& out);

}  // namespace windings::quad
