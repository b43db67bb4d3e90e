#include "windings/bm_engine.hpp"

#include "windings/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace windings {

namespace {

constexpr double kRenormalize = 300.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t grid_steps(double horizon, double dt, std::size_t min_steps) {
  const double h = std::min(dt, horizon / static_cast<double>(std::max<std::size_t>(1, min_steps)));
  return static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
}

// log(exp(a) + exp(b)) for a >= b.
double log_add(double a, double b) {
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

LogTrapezoid::LogTrapezoid(double x0) : shift_(x0) {}

void LogTrapezoid::step(double x_next, double dt) {
  if (x_next - shift_ > kRenormalize) {
    const double factor = std::exp(shift_ - x_next);
    mantissa_ *= factor;
    left_ *= factor;
    shift_ = x_next;
  }
  const double right = std::exp(x_next - shift_);
  mantissa_ += 0.5 * dt * (left_ + right);
  left_ = right;
}

double LogTrapezoid::log_value_with_partial(double x_partial, double dt_partial) const {
  const double base = log_value();
  const double lo = std::log(0.5 * dt_partial) + shift_;
  // dt_partial/2 * (left + exp(x_partial - shift)) in log form.
  const double l1 = std::log(left_) + lo;
  const double l2 = x_partial - shift_ + lo;
  const double piece = l1 > l2 ? log_add(l1, l2) : log_add(l2, l1);
  if (dt_partial <= 0.0) return base;
  return base > piece ? log_add(base, piece) : log_add(piece, base);
}

double LogTrapezoid::log_value() const {
  if (mantissa_ <= 0.0) return kNegInf;
  return std::log(mantissa_) + shift_;
}

DriverPath simulate_driver(double u_max, double dt, RngStream& rng) {
  if (!(u_max > 0.0) || !(dt > 0.0)) throw std::invalid_argument("simulate_driver: u_max, dt > 0");
  if (dt >= u_max) throw std::invalid_argument("simulate_driver: dt >= u_max");
  const std::size_t n = grid_steps(u_max, dt, 1);
  const double h = u_max / static_cast<double>(n);
  const double sd = std::sqrt(h);
  DriverPath path;
  path.dt = h;
  path.beta.resize(n + 1);
  path.gamma.resize(n + 1);
  path.log_a.resize(n + 1);
  path.beta[0] = path.gamma[0] = 0.0;
  path.log_a[0] = kNegInf;
  LogTrapezoid acc(0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    path.beta[i] = path.beta[i - 1] + sd * rng.normal();
    path.gamma[i] = path.gamma[i - 1] + sd * rng.normal();
    acc.step(2.0 * path.beta[i], h);
    path.log_a[i] = acc.log_value();
  }
  return path;
}

double functional_at(const DriverPath& path, double u) {
  if (u < 0.0) throw std::invalid_argument("functional_at: u < 0");
  const double pos = u / path.dt;
  const std::size_t n = path.steps();
  if (pos > static_cast<double>(n) + 1e-9) throw std::out_of_range("functional_at: u past horizon");
  const auto i = std::min(static_cast<std::size_t>(pos), n == 0 ? 0 : n - 1);
  const double f = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  const double a0 = path.a(i);
  const double a1 = path.a(i + 1);
  return a0 + f * (a1 - a0);
}

std::optional<double> inverse_clock(const DriverPath& path, double t) {
  if (t < 0.0) throw std::invalid_argument("inverse_clock: t < 0");
  if (t == 0.0) return 0.0;
  const double lt = std::log(t);
  const auto it = std::lower_bound(path.log_a.begin() + 1, path.log_a.end(), lt);
  if (it == path.log_a.end()) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - path.log_a.begin());
  const double a0 = path.a(i - 1);
  const double a1 = path.a(i);
  const double f = (t - a0) / (a1 - a0);
  return (static_cast<double>(i - 1) + f) * path.dt;
}

PlanarPath planar_from_driver(const DriverPath& path) {
  PlanarPath out;
  const std::size_t n = path.beta.size();
  out.times.resize(n);
  out.points.resize(n);
  out.theta = path.gamma;
  out.clock.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.times[i] = i == 0 ? 0.0 : path.a(i);
    out.points[i] = std::polar(std::exp(path.beta[i]), path.gamma[i]);
    out.clock[i] = static_cast<double>(i) * path.dt;
  }
  return out;
}

double interpolate(std::span<const double> knots, std::span<const double> values, double at) {
  if (knots.empty() || knots.size() != values.size()) {
    throw std::invalid_argument("interpolate: knots and values must be nonempty and paired");
  }
  if (at <= knots.front()) return values.front();
  if (at >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), at);
  const auto i = static_cast<std::size_t>(it - knots.begin());
  const double f = (at - knots[i - 1]) / (knots[i] - knots[i - 1]);
  return values[i - 1] + f * (values[i] - values[i - 1]);
}

double log_exp_functional_at(double t, double nu, double dt, Exponent exponent, RngStream& rng,
                             std::size_t min_steps) {
  if (!(t > 0.0) || !(dt > 0.0)) throw std::invalid_argument("exp_functional_at: t, dt > 0");
  const double k = exponent == Exponent::two_beta ? 2.0 : 1.0;
  const std::size_t n = grid_steps(t, dt, min_steps);
  const double h = t / static_cast<double>(n);
  const double sd = std::sqrt(h);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    beta += sd * rng.normal();
    acc.step(k * (beta + nu * static_cast<double>(i) * h), h);
  }
  return acc.log_value();
}

double exp_functional_at(double t, double nu, double dt, Exponent exponent, RngStream& rng,
                         std::size_t min_steps) {
  return std::exp(log_exp_functional_at(t, nu, dt, exponent, rng, min_steps));
}

namespace {

ExitSample exit_single_exact(double c, const ExitOptions& opts, RngStream& rng) {
  ExitSample out;
  out.barrier = c;
  out.kind = ExitKind::single;
  const double t = sample_first_passage(c, rng);
  if (t > opts.time_cap) {
    out.exit_time = opts.time_cap;
    out.censored = out.time_censored = true;
    return out;
  }
  out.exit_time = t;
  std::size_t n = grid_steps(t, opts.dt, opts.min_steps);
  if (opts.max_steps > 0) n = std::min(n, opts.max_steps);
  const double h = t / static_cast<double>(n);
  const double sd = std::sqrt(h);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i > opts.step_budget) throw BudgetExhausted("exit_single: step budget exhausted");
    beta += sd * rng.normal();
    acc.step(2.0 * beta, h);
    if (acc.log_value() > opts.log_a_cutoff) {
      out.censored = true;
      break;
    }
  }
  out.functional_value = std::exp(acc.log_value());
  return out;
}

ExitSample exit_single_path(double c, const ExitOptions& opts, RngStream& rng) {
  ExitSample out;
  out.barrier = c;
  out.kind = ExitKind::single;
  const double h = opts.dt;
  const double sd = std::sqrt(h);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  double gamma = 0.0;
  for (std::size_t i = 0;; ++i) {
    if (i >= opts.step_budget) throw BudgetExhausted("exit_single: step budget exhausted");
    const double t0 = static_cast<double>(i) * h;
    if (t0 >= opts.time_cap) {
      out.exit_time = opts.time_cap;
      out.functional_value = std::exp(acc.log_value());
      out.censored = out.time_censored = true;
      return out;
    }
    const double b1 = beta + sd * rng.normal();
    const double g1 = gamma + sd * rng.normal();
    if (g1 >= c) {
      const double f = (c - gamma) / (g1 - gamma);
      out.exit_time = t0 + f * h;
      if (!out.censored) {
        out.functional_value =
            std::exp(acc.log_value_with_partial(2.0 * (beta + f * (b1 - beta)), f * h));
      } else {
        out.functional_value = std::exp(acc.log_value());
      }
      return out;
    }
    if (!out.censored) {
      acc.step(2.0 * b1, h);
      if (acc.log_value() > opts.log_a_cutoff) out.censored = true;
    }
    beta = b1;
    gamma = g1;
  }
}

}  // namespace

ExitSample exit_single(double c, ExitMode mode, const ExitOptions& opts, RngStream& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("exit_single: c > 0");
  return mode == ExitMode::exact ? exit_single_exact(c, opts, rng) : exit_single_path(c, opts, rng);
}

ExitSample exit_double(double c, const ExitOptions& opts, RngStream& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("exit_double: c > 0");
  ExitSample out;
  out.barrier = c;
  out.kind = ExitKind::double_barrier;
  const double h = opts.dt;
  const double sd = std::sqrt(h);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  double gamma = 0.0;
  for (std::size_t i = 0;; ++i) {
    if (i >= opts.step_budget) throw BudgetExhausted("exit_double: step budget exhausted");
    const double t0 = static_cast<double>(i) * h;
    const double b1 = beta + sd * rng.normal();
    const double g1 = gamma + sd * rng.normal();
    double f = -1.0;
    if (std::abs(g1) >= c) {
      const double target = g1 > 0.0 ? c : -c;
      f = (target - gamma) / (g1 - gamma);
    } else {
      const double side = gamma + g1 >= 0.0 ? 1.0 : -1.0;
      const double d0 = c - side * gamma;
      const double d1 = c - side * g1;
      if (rng.uniform() < std::exp(-2.0 * d0 * d1 / h)) f = 0.5;
    }
    if (f >= 0.0) {
      out.exit_time = t0 + f * h;
      out.functional_value =
          std::exp(acc.log_value_with_partial(2.0 * (beta + f * (b1 - beta)), f * h));
      return out;
    }
    acc.step(2.0 * b1, h);
    beta = b1;
    gamma = g1;
  }
}

CoupledExit coupled_exit_times(double c, const ExitOptions& opts, RngStream& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("coupled_exit_times: c > 0");
  CoupledExit out;
  const double h = opts.dt;
  const double sd = std::sqrt(h);
  double gamma = 0.0;
  bool have_double = false;
  for (std::size_t i = 0;; ++i) {
    if (i >= opts.step_budget) throw BudgetExhausted("coupled_exit_times: step budget exhausted");
    const double t0 = static_cast<double>(i) * h;
    if (t0 >= opts.time_cap) {
      if (!have_double) out.double_time = opts.time_cap;
      out.single_time = opts.time_cap;
      out.single_censored = true;
      return out;
    }
    const double g1 = gamma + sd * rng.normal();
    if (!have_double && std::abs(g1) >= c) {
      const double target = g1 > 0.0 ? c : -c;
      out.double_time = t0 + (target - gamma) / (g1 - gamma) * h;
      have_double = true;
    }
    if (g1 >= c) {
      out.single_time = t0 + (c - gamma) / (g1 - gamma) * h;
      return out;
    }
    gamma = g1;
  }
}

std::optional<PlanarPath> winding_direct(const WindingOptions& opts, RngStream& rng) {
  if (!(opts.t_max > 0.0) || !(opts.dt_base > 0.0)) {
    throw std::invalid_argument("winding_direct: t_max, dt_base > 0");
  }
  struct Segment {
    std::complex<double> end;
    double dt;
    int depth;
  };
  PlanarPath path;
  std::complex<double> z(1.0, 0.0);
  double t = 0.0;
  double theta = 0.0;
  double clock = 0.0;
  path.times.push_back(t);
  path.points.push_back(z);
  path.theta.push_back(theta);
  path.clock.push_back(clock);
  std::vector<Segment> pending;
  while (t < opts.t_max) {
    double h = opts.dt_base * std::min(1.0, std::norm(z));
    if (t + h > opts.t_max || opts.t_max - (t + h) < 1e-12 * opts.t_max) h = opts.t_max - t;
    const double sd = std::sqrt(h);
    const double dx = sd * rng.normal();
    const double dy = sd * rng.normal();
    pending.push_back({z + std::complex<double>(dx, dy), h, 0});
    while (!pending.empty()) {
      const Segment seg = pending.back();
      if (std::abs(seg.end) < opts.origin_tol) return std::nullopt;
      const double w = std::arg(seg.end / z);
      if (std::abs(w) >= 0.5 * std::numbers::pi) {
        if (seg.depth >= opts.max_refine) return std::nullopt;
        pending.pop_back();
        const double half = 0.5 * seg.dt;
        const double msd = std::sqrt(0.5 * half);
        const double mx = msd * rng.normal();
        const double my = msd * rng.normal();
        const std::complex<double> mid = 0.5 * (z + seg.end) + std::complex<double>(mx, my);
        pending.push_back({seg.end, half, seg.depth + 1});
        pending.push_back({mid, half, seg.depth + 1});
        continue;
      }
      pending.pop_back();
      clock += 0.5 * seg.dt * (1.0 / std::norm(z) + 1.0 / std::norm(seg.end));
      theta += w;
      t += seg.dt;
      z = seg.end;
      path.times.push_back(t);
      path.points.push_back(z);
      path.theta.push_back(theta);
      path.clock.push_back(clock);
    }
  }
  path.times.back() = opts.t_max;
  return path;
}

std::optional<DriverState> driver_state_at(double t, double dt, RngStream& rng, double u_budget) {
  if (!(t > 0.0) || !(dt > 0.0)) throw std::invalid_argument("driver_state_at: t, dt > 0");
  const double sd = std::sqrt(dt);
  const double lt = std::log(t);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  double gamma = 0.0;
  double la_prev = kNegInf;
  for (std::size_t i = 0;; ++i) {
    const double u0 = static_cast<double>(i) * dt;
    if (u0 >= u_budget) return std::nullopt;
    const double b1 = beta + sd * rng.normal();
    const double g1 = gamma + sd * rng.normal();
    acc.step(2.0 * b1, dt);
    const double la = acc.log_value();
    if (la > lt) {
      // (t - A_i) / (A_{i+1} - A_i) with both pieces scaled by A_{i+1}.
      const double r_prev = la_prev == kNegInf ? 0.0 : std::exp(la_prev - la);
      const double f = (std::exp(lt - la) - r_prev) / (1.0 - r_prev);
      const double spread = std::sqrt(f * (1.0 - f) * dt);
      DriverState s;
      s.theta = gamma + f * (g1 - gamma) + spread * rng.normal();
      s.log_radius = beta + f * (b1 - beta) + spread * rng.normal();
      s.clock = u0 + f * dt;
      return s;
    }
    la_prev = la;
    beta = b1;
    gamma = g1;
  }
}

std::optional<double> winding_driver(double t, double dt, RngStream& rng, double u_budget) {
  const auto s = driver_state_at(t, dt, rng, u_budget);
  if (!s) return std::nullopt;
  return s->theta;
}

std::optional<double> winding_at_large_t(double log_t, double dt, RngStream& rng, double u_budget) {
  if (!(dt > 0.0)) throw std::invalid_argument("winding_at_large_t: dt > 0");
  const double sd = std::sqrt(dt);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  double la_prev = kNegInf;
  for (std::size_t i = 0;; ++i) {
    const double u0 = static_cast<double>(i) * dt;
    if (u0 >= u_budget) return std::nullopt;
    beta += sd * rng.normal();
    acc.step(2.0 * beta, dt);
    const double la = acc.log_value();
    if (la > log_t) {
      const double r_prev = la_prev == kNegInf ? 0.0 : std::exp(la_prev - la);
      const double f = (std::exp(log_t - la) - r_prev) / (1.0 - r_prev);
      const double clock = u0 + f * dt;
      return std::sqrt(clock) * rng.normal();
    }
    la_prev = la;
  }
}

ClockSample clock_at_first_passage(double b, double dt, RngStream& rng, double u_budget) {
  if (!(b > 0.0) || !(dt > 0.0)) throw std::invalid_argument("clock_at_first_passage: b, dt > 0");
  const double tau = sample_first_passage(b, rng);
  const double lt = std::log(tau);
  const double sd = std::sqrt(dt);
  LogTrapezoid acc(0.0);
  double beta = 0.0;
  double la_prev = kNegInf;
  for (std::size_t i = 0;; ++i) {
    const double u0 = static_cast<double>(i) * dt;
    if (u0 >= u_budget) return {u_budget, true};
    beta += sd * rng.normal();
    acc.step(2.0 * beta, dt);
    const double la = acc.log_value();
    if (la > lt) {
      const double r_prev = la_prev == kNegInf ? 0.0 : std::exp(la_prev - la);
      const double f = (std::exp(lt - la) - r_prev) / (1.0 - r_prev);
      return {u0 + f * dt, false};
    }
    la_prev = la;
  }
}

double yor_exptime_functional(const YorParams& p, double dt, RngStream& rng,
                              std::size_t min_steps) {
  if (!(p.lambda > 0.0)) throw std::invalid_argument("yor_exptime_functional: lambda > 0");
  const double t = rng.exponential() / p.lambda;
  return exp_functional_at(t, p.nu, dt, Exponent::two_beta, rng, min_steps);
}

std::vector<McEstimate> asian_call_grid(const AsianSpec& spec, std::span<const double> strikes,
                                        std::size_t n_paths, std::uint64_t seed,
                                        std::size_t parallelism) {
  if (n_paths == 0) throw std::invalid_argument("asian_call: n_paths = 0");
  if (!(spec.t > 0.0) || !(spec.dt > 0.0)) throw std::invalid_argument("asian_call: t, dt > 0");
  for (double k : strikes) {
    if (!(k >= 0.0)) throw std::invalid_argument("asian_call: strike < 0");
  }
  const std::size_t pairs = std::max<std::size_t>(2, (n_paths + 1) / 2);
  const double k = spec.exponent == Exponent::two_beta ? 2.0 : 1.0;
  const std::size_t n = grid_steps(spec.t, spec.dt, 1);
  const double h = spec.t / static_cast<double>(n);
  const double sd = std::sqrt(h);
  auto payoffs = parallel_map(pairs, parallelism, [&](std::size_t p) {
    RngStream rng(seed, p);
    LogTrapezoid plus(0.0);
    LogTrapezoid minus(0.0);
    double beta = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      beta += sd * rng.normal();
      const double drift = spec.nu * static_cast<double>(i) * h;
      plus.step(k * (beta + drift), h);
      minus.step(k * (-beta + drift), h);
    }
    const double ap = std::exp(plus.log_value()) / spec.t;
    const double am = std::exp(minus.log_value()) / spec.t;
    std::vector<double> row(strikes.size());
    for (std::size_t j = 0; j < strikes.size(); ++j) {
      row[j] = 0.5 * (std::max(ap - strikes[j], 0.0) + std::max(am - strikes[j], 0.0));
    }
    return row;
  });
  std::vector<McEstimate> out;
  out.reserve(strikes.size());
  std::vector<double> column(pairs);
  for (std::size_t j = 0; j < strikes.size(); ++j) {
    for (std::size_t p = 0; p < pairs; ++p) column[p] = payoffs[p][j];
    out.push_back(estimate_mean(column));
  }
  return out;
}

McEstimate asian_call(const AsianSpec& spec, double strike, std::size_t n_paths,
                      std::uint64_t seed, std::size_t parallelism) {
  const double strikes[] = {strike};
  return asian_call_grid(spec, strikes, n_paths, seed, parallelism).front();
}

}  // namespace windings
