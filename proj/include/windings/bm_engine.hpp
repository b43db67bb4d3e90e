#pragma once

// Path simulation of planar Brownian motion Z (issued from 1) by two routes:
//
//  * driver route: the skew-product pair (beta, gamma) of independent linear
//    Brownian motions in the clock time u, with A_u = int_0^u exp(2 beta_s) ds
//    the inverse of the Bessel clock H_t = int_0^t |Z_s|^{-2} ds;
//  * direct route: Gaussian steps of Z itself, with the winding accumulated
//    from principal arguments of Z_{i+1} / Z_i.

#include "windings/rng.hpp"
#include "windings/samplers.hpp"
#include "windings/stats.hpp"

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace windings {

// Raised when a path runs out of its step or time budget before the event it
// waits for.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trapezoid rule for int exp(x_s) ds carried as mantissa * exp(shift), so the
// exponent may run far outside the double range.
class LogTrapezoid {
 public:
  explicit LogTrapezoid(double x0 = 0.0);

  void step(double x_next, double dt);
  // log of the running value plus a partial step to exponent x_partial.
  double log_value_with_partial(double x_partial, double dt_partial) const;
  double log_value() const;

 private:
  double shift_;
  double mantissa_ = 0.0;
  double left_ = 1.0;  // exp(x_prev - shift_)
};

struct DriverPath {
  double dt = 0.0;
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> log_a;  // log A at each grid point, -inf at u = 0

  std::size_t steps() const { return beta.empty() ? 0 : beta.size() - 1; }
  double a(std::size_t i) const { return std::exp(log_a[i]); }
};

struct PlanarPath {
  std::vector<double> times;
  std::vector<std::complex<double>> points;
  std::vector<double> theta;
  std::vector<double> clock;
};

DriverPath simulate_driver(double u_max, double dt, RngStream& rng);

// A_u, linear in A between grid points.
double functional_at(const DriverPath& path, double u);

// inf{u : A_u > t}, linear in A between grid points; nullopt past the horizon.
std::optional<double> inverse_clock(const DriverPath& path, double t);

// Z on the driver grid: times A_u, points exp(beta + i gamma), theta = gamma,
// clock u.
PlanarPath planar_from_driver(const DriverPath& path);

// Linear interpolation of values over increasing knots; clamps at the ends.
double interpolate(std::span<const double> knots, std::span<const double> values, double at);

enum class Exponent { beta = 1, two_beta = 2 };

// One draw of int_0^t exp(k (beta_s + nu s)) ds, k = 1 or 2. The grid is
// uniform with step min(dt, t / min_steps).
double exp_functional_at(double t, double nu, double dt, Exponent exponent, RngStream& rng,
                         std::size_t min_steps = 1);
double log_exp_functional_at(double t, double nu, double dt, Exponent exponent, RngStream& rng,
                             std::size_t min_steps = 1);

enum class ExitKind { single, double_barrier };
enum class ExitMode { exact, path };

struct ExitSample {
  double barrier = 0.0;
  ExitKind kind = ExitKind::single;
  double exit_time = 0.0;
  double functional_value = 0.0;  // A at the exit time
  // functional_value is only a lower bound: integration stopped once log A
  // passed ExitOptions::log_a_cutoff, or the exit time hit the time cap.
  bool censored = false;
  bool time_censored = false;
};

struct ExitOptions {
  double dt = 1e-3;
  // exact mode refines the grid to at least this many steps on [0, T].
  std::size_t min_steps = 256;
  // exact mode coarsens the grid to at most this many steps; 0 means no cap.
  std::size_t max_steps = 0;
  double log_a_cutoff = std::numeric_limits<double>::infinity();
  std::size_t step_budget = 200'000'000;
  // exit times beyond the cap are reported as censored at the cap.
  double time_cap = std::numeric_limits<double>::infinity();
};

// Exit of gamma above c and A at that time. Exact mode draws T = c^2 / N^2
// and integrates beta on [0, T]; path mode steps gamma until it crosses c.
ExitSample exit_single(double c, ExitMode mode, const ExitOptions& opts, RngStream& rng);

// Exit of |gamma| from [-c, c], with a Brownian bridge test inside each step.
ExitSample exit_double(double c, const ExitOptions& opts, RngStream& rng);

struct CoupledExit {
  double double_time = 0.0;
  double single_time = 0.0;
  bool single_censored = false;
};

// Both exit times read off one gamma path (grid crossings only).
CoupledExit coupled_exit_times(double c, const ExitOptions& opts, RngStream& rng);

struct WindingOptions {
  double t_max = 1.0;
  double dt_base = 1e-3;
  double origin_tol = 1e-6;
  int max_refine = 24;
};

// Direct route; nullopt when the path comes within origin_tol of 0 or a step
// cannot be refined below a quarter turn.
std::optional<PlanarPath> winding_direct(const WindingOptions& opts, RngStream& rng);

struct DriverState {
  double theta = 0.0;       // gamma_{H_t}
  double log_radius = 0.0;  // beta_{H_t} = log |Z_t|
  double clock = 0.0;       // H_t
};

// Driver route at time t: beta and gamma are stepped in clock time until A
// passes t, and both are read at H_t through a Brownian bridge. nullopt if the
// clock passes u_budget first.
std::optional<DriverState> driver_state_at(double t, double dt, RngStream& rng,
                                           double u_budget = 1e4);

// theta_t from driver_state_at.
std::optional<double> winding_driver(double t, double dt, RngStream& rng, double u_budget = 1e4);

// theta_t for huge t: beta is stepped until log A_u passes log t, and gamma is
// drawn exactly as sqrt(H_t) N given the clock.
std::optional<double> winding_at_large_t(double log_t, double dt, RngStream& rng,
                                         double u_budget = 1e6);

struct ClockSample {
  double value = 0.0;
  bool censored = false;  // value is the budget; the true clock is larger
};

// H at an independent first passage time T_b of another Brownian motion:
// T_b = b^2 / N^2, then H = inf{u : A_u > T_b}.
ClockSample clock_at_first_passage(double b, double dt, RngStream& rng, double u_budget = 1e3);

// int_0^{T_lambda} exp(2 (beta_s + nu s)) ds with T_lambda ~ Exp(lambda).
double yor_exptime_functional(const YorParams& p, double dt, RngStream& rng,
                              std::size_t min_steps = 64);

struct AsianSpec {
  double t = 1.0;
  double nu = 0.0;
  double dt = 1e-3;
  Exponent exponent = Exponent::two_beta;
};

// E[(A_t / t - K)^+] for each strike on common antithetic paths: pair p uses
// stream (seed, p) and both signs of its increments.
std::vector<McEstimate> asian_call_grid(const AsianSpec& spec, std::span<const double> strikes,
                                        std::size_t n_paths, std::uint64_t seed,
                                        std::size_t parallelism = 1);

McEstimate asian_call(const AsianSpec& spec, double strike, std::size_t n_paths,
                      std::uint64_t seed, std::size_t parallelism = 1);

}  // namespace windings
