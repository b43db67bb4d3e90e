#pragma once

// Isotropic planar alpha-stable paths U issued from 1, built as planar
// Brownian motion run with an independent (alpha/2)-stable subordinator:
// E exp(i <v, U_t - U_0>) = exp(-t (|v|^2 / 2)^{alpha/2}).
//
// Two samplers are provided. simulate_stable steps real time with a fixed dt.
// simulate_stable_clocked steps the clock H_t = int |U_s|^{-alpha} ds with a
// fixed h instead; by scaling, the increment over real time h |U|^alpha is
// |U| times a unit-scale increment over time h, so the angle and log-radius
// move by arg(1 + X) and log|1 + X| and never lose resolution near 0 or far
// from it.

#include "windings/rng.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace windings {

class SegmentThroughOrigin : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct StablePath {
  double alpha = 1.0;
  std::vector<double> times;
  std::vector<std::complex<double>> points;
  std::vector<double> theta;
  std::vector<double> clock;
  std::vector<char> jump_flags;  // flag[i] describes the step into point i
};

// Argument change along the segment [z1, z2]: omega(z2 / z1) in (-pi, pi].
// Throws SegmentThroughOrigin when the segment meets 0.
double winding_increment(std::complex<double> z1, std::complex<double> z2);

// Unit-variance-per-coordinate planar Gaussian run at an (alpha/2)-stable
// time of scale dt; alpha = 2 gives sqrt(dt) (N1 + i N2).
std::complex<double> stable_increment(double alpha, double dt, RngStream& rng);

// Fixed real-time steps on [0, t_max]. A step is flagged as a jump when
// |dU| > 6 dt^{1/alpha}. Throws SegmentThroughOrigin if a point falls within
// origin_tol of 0.
StablePath simulate_stable(double alpha, double t_max, double dt, RngStream& rng,
                           double origin_tol = 1e-12);

// Fixed clock steps h on [0, u_max]; times carry real time T_i.
StablePath simulate_stable_clocked(double alpha, double u_max, double h, RngStream& rng);

// theta at A(u) = inf{t : H_t > u}, linear in the clock between grid points.
// Throws std::out_of_range when the path's clock stops short of u.
double time_changed_winding(const StablePath& path, double u);

struct WindingExit {
  double log_time = 0.0;   // log of the first grid time with theta >= c
  double overshoot = 0.0;  // theta - c at that point
  double clock = 0.0;
  std::size_t steps = 0;
  bool censored = false;   // clock budget spent first; log_time is a lower bound
};

// First passage of the winding above each barrier (sorted increasing) along
// one clocked path of step h, up to a clock budget.
std::vector<WindingExit> winding_exit_times(double alpha, std::span<const double> barriers,
                                            double h, RngStream& rng, double clock_budget);

WindingExit winding_exit_time(double alpha, double c, double h, RngStream& rng,
                              double clock_budget);

// (1/t) log T^{theta}_{c_scale sqrt(t)}; its limit in law is
// c_scale^2 / (r(alpha) N^2). nullopt when the clock budget is spent first.
std::optional<double> spitzer_stable_statistic(double alpha, double c_scale, double t, double h,
                                               RngStream& rng, double clock_budget);

}  // namespace windings
