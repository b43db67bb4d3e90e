#include "windings/bm_engine.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

using namespace windings;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

template <typename Fn>
std::vector<double> draw(std::size_t n, std::uint64_t seed, Fn fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, i);
    out[i] = fn(rng);
  }
  return out;
}

}  // namespace

TEST_CASE("log trapezoid") {
  LogTrapezoid acc(0.0);
  const double h = 1e-3;
  for (int i = 1; i <= 1000; ++i) acc.step(2.0 * i * h, h);
  CHECK(std::exp(acc.log_value()) == Approx(std::expm1(2.0) / 2.0).epsilon(1e-6));
  LogTrapezoid big(0.0);
  for (int i = 1; i <= 100000; ++i) big.step(2000.0 * i * 1e-5, 1e-5);
  CHECK(big.log_value() == Approx(2000.0 - std::log(2000.0)).epsilon(1e-6));
  CHECK(std::isfinite(big.log_value()));
  LogTrapezoid part(0.0);
  CHECK(std::exp(part.log_value_with_partial(0.0, 0.25)) == Approx(0.25));
}

TEST_CASE("driver path invariants") {
  RngStream rng(1, 0);
  const auto path = simulate_driver(2.0, 1e-3, rng);
  REQUIRE(path.steps() == 2000);
  CHECK(path.beta.front() == 0.0);
  CHECK(path.gamma.front() == 0.0);
  for (std::size_t i = 1; i <= path.steps(); ++i) CHECK(path.log_a[i] > path.log_a[i - 1]);
  // H(A(u)) = u on grid points
  for (std::size_t i : {std::size_t{1}, std::size_t{500}, std::size_t{2000}}) {
    const auto u = inverse_clock(path, path.a(i));
    REQUIRE(u.has_value());
    CHECK(*u == Approx(static_cast<double>(i) * 1e-3).epsilon(1e-9));
    CHECK(functional_at(path, *u) == Approx(path.a(i)).epsilon(1e-9));
  }
  CHECK_FALSE(inverse_clock(path, path.a(2000) * 2.0).has_value());
  const auto planar = planar_from_driver(path);
  for (std::size_t i = 0; i < planar.points.size(); i += 97) {
    CHECK(std::abs(planar.points[i]) == Approx(std::exp(path.beta[i])).epsilon(1e-12));
    CHECK(planar.theta[i] == path.gamma[i]);
  }
}

TEST_CASE("driver moments") {
  const auto beta = draw(20000, 2, [](RngStream& r) { return simulate_driver(1.0, 1e-2, r).beta.back(); });
  CHECK(within_se(estimate_mean(beta), 0.0));
  std::vector<double> sq(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) sq[i] = beta[i] * beta[i];
  CHECK(within_se(estimate_mean(sq), 1.0));
  const auto a = draw(20000, 3, [](RngStream& r) { return exp_functional_at(1.0, 0.0, 1e-3, Exponent::two_beta, r); });
  const auto est = estimate_mean(a);
  CHECK(within_se(est, std::expm1(2.0) / 2.0, 3.5));
  const auto b = draw(20000, 4, [](RngStream& r) { return exp_functional_at(1.0, 0.0, 1e-3, Exponent::beta, r); });
  CHECK(within_se(estimate_mean(b), 2.0 * (std::exp(0.5) - 1.0)));
  const auto small = draw(2000, 5, [](RngStream& r) { return exp_functional_at(1e-3, 0.0, 1e-5, Exponent::two_beta, r) / 1e-3; });
  CHECK(estimate_mean(small).mean == Approx(1.0).epsilon(0.01));
  RngStream rng(6, 0);
  CHECK(std::exp(log_exp_functional_at(2.0, 0.3, 1e-2, Exponent::two_beta, rng)) > 0.0);
}

TEST_CASE("interpolate") {
  const std::vector<double> k{0.0, 1.0, 3.0};
  const std::vector<double> v{0.0, 2.0, 0.0};
  CHECK(interpolate(k, v, 0.5) == Approx(1.0));
  CHECK(interpolate(k, v, 2.0) == Approx(1.0));
  CHECK(interpolate(k, v, 3.0) == Approx(0.0));
}

TEST_CASE("single barrier exit") {
  ExitOptions opts;
  opts.dt = 1e-3;
  opts.max_steps = 1;
  const auto t = draw(20000, 10, [&](RngStream& r) { return exit_single(1.0, ExitMode::exact, opts, r).exit_time; });
  CHECK(median(t) == Approx(1.0 / kMedianChiSquare1).epsilon(0.02));
  ExitOptions popts = opts;
  popts.dt = 1e-3;
  popts.time_cap = 50.0;
  std::vector<double> tp;
  std::vector<double> te;
  for (std::size_t i = 0; i < 3000; ++i) {
    RngStream r(11, i);
    const auto s = exit_single(1.0, ExitMode::path, popts, r);
    tp.push_back(s.time_censored ? 50.0 : s.exit_time);
    te.push_back(std::min(t[i], 50.0));
  }
  CHECK_FALSE(ks_two_sample(tp, te, 0.05, 1.5).rejected());
  // GLT1 at x = 0: c E[sqrt(pi / (2 A))] = 1
  std::vector<double> stat;
  ExitOptions gopts = opts;
  gopts.log_a_cutoff = 30.0;
  gopts.max_steps = 8192;
  for (std::size_t i = 0; i < 20000; ++i) {
    RngStream r(12, i);
    const auto s = exit_single(1.0, ExitMode::exact, gopts, r);
    stat.push_back(s.censored ? 0.0 : std::sqrt(kPi / (2.0 * s.functional_value)));
  }
  CHECK(within_se(estimate_mean(stat), 1.0, 3.5));
}

TEST_CASE("double barrier exit") {
  ExitOptions opts;
  opts.dt = 1e-3;
  const double c = kPi / 4;
  std::vector<double> s0;
  std::vector<double> s1;
  for (std::size_t i = 0; i < 20000; ++i) {
    RngStream r(20, i);
    const auto e = exit_double(c, opts, r);
    REQUIRE_FALSE(e.censored);
    const double a = e.functional_value;
    s0.push_back(c * std::sqrt(2.0 / (kPi * a)));
    s1.push_back(c * std::sqrt(2.0 / (kPi * a)) * std::exp(-1.0 / (2.0 * a)));
  }
  CHECK(within_se(estimate_mean(s0), 1.0, 3.5));
  CHECK(within_se(estimate_mean(s1), 0.235702, 3.5));
  ExitOptions copts = opts;
  copts.time_cap = 200.0;
  for (std::size_t i = 0; i < 500; ++i) {
    RngStream r(21, i);
    const auto e = coupled_exit_times(1.0, copts, r);
    CHECK(e.double_time <= e.single_time);
  }
}

TEST_CASE("winding routes agree") {
  const auto drv = draw(4000, 30, [](RngStream& r) { return winding_driver(1.0, 1e-3, r).value_or(0.0); });
  std::vector<double> dir;
  for (std::size_t i = 0; i < 4000; ++i) {
    RngStream r(31, i);
    WindingOptions w;
    w.t_max = 1.0;
    w.dt_base = 1e-3;
    const auto p = winding_direct(w, r);
    if (p) dir.push_back(p->theta.back());
  }
  CHECK(dir.size() > 3900);
  CHECK(within_se(estimate_mean(drv), 0.0));
  CHECK_FALSE(ks_two_sample(drv, dir, 0.05, 1.5).rejected());
  RngStream r(32, 0);
  const auto s = driver_state_at(1.0, 1e-3, r);
  REQUIRE(s.has_value());
  CHECK(s->clock > 0.0);
}

TEST_CASE("clock at first passage") {
  const double a = std::asinh(1.0);
  CHECK(a == Approx(0.881374).epsilon(1e-6));
  std::vector<double> h;
  std::vector<double> ref;
  for (std::size_t i = 0; i < 4000; ++i) {
    RngStream r(40, i);
    const auto s = clock_at_first_passage(1.0, 1e-3, r, 1e3);
    h.push_back(s.value);
    RngStream q(41, i);
    ref.push_back(std::min(sample_first_passage(a, q), 1e3));
  }
  CHECK_FALSE(ks_two_sample(h, ref, 0.05, 1.5).rejected());
  RngStream r(42, 0);
  CHECK(clock_at_first_passage(1e-6, 1e-3, r).value < 1e-3);
}

TEST_CASE("yor exponential time functional") {
  const auto p = make_yor_params(2.0, 0.0);
  const auto path = draw(4000, 50, [&](RngStream& r) { return yor_exptime_functional(p, 1e-3, r); });
  const auto exact = draw(4000, 51, [&](RngStream& r) { return sample_yor_rhs(p, r); });
  CHECK(median(path) == Approx(median(exact)).epsilon(0.05));
  CHECK_FALSE(ks_two_sample(path, exact, 0.05, 1.5).rejected());
  std::vector<double> doubled(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) doubled[i] = 2.0 * path[i];
  CHECK(ks_two_sample(doubled, exact, 0.05, 1.5).rejected());
  const auto fast = draw(2000, 52, [](RngStream& r) { return yor_exptime_functional(make_yor_params(1e4, 0.0), 1e-5, r); });
  CHECK(median(fast) < 1e-3);
}

TEST_CASE("asian call") {
  AsianSpec spec;
  const std::vector<double> strikes{0.0, 1.0, 2.0, 4.0, 1e6};
  const auto est = asian_call_grid(spec, strikes, 20000, 7);
  CHECK(within_se(est[0], std::expm1(2.0) / 2.0));
  for (std::size_t j = 1; j < est.size(); ++j) CHECK(est[j].mean <= est[j - 1].mean);
  CHECK(est.back().mean == 0.0);
  const auto again = asian_call(spec, 0.0, 20000, 7, 4);
  CHECK(again.mean == est[0].mean);
  AsianSpec b = spec;
  b.exponent = Exponent::beta;
  CHECK(within_se(asian_call(b, 0.0, 20000, 8), 2.0 * (std::exp(0.5) - 1.0)));
  CHECK_THROWS_AS(asian_call(spec, -1.0, 10, 1), std::invalid_argument);
}
