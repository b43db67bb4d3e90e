#include "windings/stable_engine.hpp"

#include "windings/bm_engine.hpp"
#include "windings/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace windings {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("stable: alpha must be in (0, 2)");
}

}  // namespace

double winding_increment(std::complex<double> z1, std::complex<double> z2) {
  if (z1 == 0.0 || z2 == 0.0) throw SegmentThroughOrigin("winding_increment: endpoint at origin");
  const std::complex<double> w = z2 / z1;
  if (w.imag() == 0.0 && w.real() < 0.0) {
    throw SegmentThroughOrigin("winding_increment: segment passes through origin");
  }
  return std::arg(w);
}

std::complex<double> stable_increment(double alpha, double dt, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("stable: alpha must be in (0, 2]");
  const double s = alpha == 2.0 ? dt : sample_stable_subordinator_increment(0.5 * alpha, dt, rng);
  const double sd = std::sqrt(s);
  const double x = sd * rng.normal();
  const double y = sd * rng.normal();
  return {x, y};
}

StablePath simulate_stable(double alpha, double t_max, double dt, RngStream& rng,
                           double origin_tol) {
  require_alpha(alpha);
  if (!(t_max > 0.0) || !(dt > 0.0)) throw std::invalid_argument("simulate_stable: t_max, dt > 0");
  const auto n = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  const double h = t_max / static_cast<double>(n);
  const double jump_level = 6.0 * std::pow(h, 1.0 / alpha);
  StablePath path;
  path.alpha = alpha;
  path.times.reserve(n + 1);
  path.points.reserve(n + 1);
  path.theta.reserve(n + 1);
  path.clock.reserve(n + 1);
  path.jump_flags.reserve(n + 1);
  std::complex<double> z(1.0, 0.0);
  double theta = 0.0;
  double clock = 0.0;
  path.times.push_back(0.0);
  path.points.push_back(z);
  path.theta.push_back(0.0);
  path.clock.push_back(0.0);
  path.jump_flags.push_back(0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::complex<double> dz = stable_increment(alpha, h, rng);
    const std::complex<double> next = z + dz;
    if (std::abs(next) < origin_tol) throw SegmentThroughOrigin("simulate_stable: hit origin_tol");
    theta += winding_increment(z, next);
    clock += 0.5 * h * (std::pow(std::abs(z), -alpha) + std::pow(std::abs(next), -alpha));
    z = next;
    path.times.push_back(static_cast<double>(i) * h);
    path.points.push_back(z);
    path.theta.push_back(theta);
    path.clock.push_back(clock);
    path.jump_flags.push_back(std::abs(dz) > jump_level ? 1 : 0);
  }
  return path;
}

StablePath simulate_stable_clocked(double alpha, double u_max, double h, RngStream& rng) {
  require_alpha(alpha);
  if (!(u_max > 0.0) || !(h > 0.0)) throw std::invalid_argument("simulate_stable_clocked: u_max, h > 0");
  const auto n = static_cast<std::size_t>(std::ceil(u_max / h - 1e-9));
  const double step = u_max / static_cast<double>(n);
  const double jump_level = 6.0 * std::pow(step, 1.0 / alpha);
  StablePath path;
  path.alpha = alpha;
  path.times.reserve(n + 1);
  path.points.reserve(n + 1);
  path.theta.reserve(n + 1);
  path.clock.reserve(n + 1);
  path.jump_flags.reserve(n + 1);
  double theta = 0.0;
  double xi = 0.0;
  double t = 0.0;
  path.times.push_back(0.0);
  path.points.push_back({1.0, 0.0});
  path.theta.push_back(0.0);
  path.clock.push_back(0.0);
  path.jump_flags.push_back(0);
  for (std::size_t i = 1; i <= n; ++i) {
    t += step * std::exp(alpha * xi);
    const std::complex<double> x = stable_increment(alpha, step, rng);
    const std::complex<double> w = 1.0 + x;
    theta += winding_increment(1.0, w);
    xi += std::log(std::abs(w));
    path.times.push_back(t);
    path.points.push_back(std::polar(std::exp(xi), theta));
    path.theta.push_back(theta);
    path.clock.push_back(static_cast<double>(i) * step);
    path.jump_flags.push_back(std::abs(x) > jump_level ? 1 : 0);
  }
  return path;
}

double time_changed_winding(const StablePath& path, double u) {
  if (path.clock.empty() || u > path.clock.back()) {
    throw std::out_of_range("time_changed_winding: clock does not reach u");
  }
  return interpolate(path.clock, path.theta, u);
}

std::vector<WindingExit> winding_exit_times(double alpha, std::span<const double> barriers,
                                            double h, RngStream& rng, double clock_budget) {
  require_alpha(alpha);
  if (!(h > 0.0)) throw std::invalid_argument("winding_exit_times: h > 0");
  if (!std::is_sorted(barriers.begin(), barriers.end())) {
    throw std::invalid_argument("winding_exit_times: barriers must be increasing");
  }
  std::vector<WindingExit> out(barriers.size());
  const double log_h = std::log(h);
  double theta = 0.0;
  double xi = 0.0;
  double log_t = -std::numeric_limits<double>::infinity();
  std::size_t next = 0;
  std::size_t i = 0;
  while (next < barriers.size()) {
    const double clock = static_cast<double>(i) * h;
    if (clock >= clock_budget) {
      for (; next < barriers.size(); ++next) {
        out[next] = {log_t, 0.0, clock, i, true};
      }
      break;
    }
    const double piece = log_h + alpha * xi;
    log_t = log_t > piece ? log_t + std::log1p(std::exp(piece - log_t))
                          : piece + std::log1p(std::exp(log_t - piece));
    const std::complex<double> w = 1.0 + stable_increment(alpha, h, rng);
    theta += winding_increment(1.0, w);
    xi += std::log(std::abs(w));
    ++i;
    while (next < barriers.size() && theta >= barriers[next]) {
      out[next] = {log_t, theta - barriers[next], static_cast<double>(i) * h, i, false};
      ++next;
    }
  }
  return out;
}

WindingExit winding_exit_time(double alpha, double c, double h, RngStream& rng,
                              double clock_budget) {
  if (!(c > 0.0)) throw std::invalid_argument("winding_exit_time: c > 0");
  const double barriers[] = {c};
  return winding_exit_times(alpha, barriers, h, rng, clock_budget).front();
}

std::optional<double> spitzer_stable_statistic(double alpha, double c_scale, double t, double h,
                                               RngStream& rng, double clock_budget) {
  if (!(t > 0.0) || !(c_scale > 0.0)) throw std::invalid_argument("spitzer_stable_statistic: t, c_scale > 0");
  const WindingExit e = winding_exit_time(alpha, c_scale * std::sqrt(t), h, rng, clock_budget);
  if (e.censored) return std::nullopt;
  return e.log_time / t;
}

}  // namespace windings
