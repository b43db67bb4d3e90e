#include "windings/samplers.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

using namespace windings;
using doctest::Approx;

namespace {

template <typename Fn>
std::vector<double> draw(std::size_t n, std::uint64_t seed, Fn fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, i);
    out[i] = fn(rng);
  }
  return out;
}

template <typename Fn>
McEstimate mean_of(std::span<const double> xs, Fn fn) {
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = fn(xs[i]);
  return estimate_mean(ys);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Level for distributional checks of exact samplers at N = 1e5.
constexpr double kLevel = 1e-3;

}  // namespace

TEST_CASE("basic laws") {
  const auto g = draw(100000, 1, [](RngStream& r) { return sample_gamma_half(r); });
  CHECK(within_se(estimate_mean(g), 0.5));
  const auto c = draw(100000, 2, [](RngStream& r) { return sample_cauchy(1.0, r); });
  CHECK(within_se(mean_of(c, [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; }), 0.5));
  CHECK_FALSE(ks_one_sample(c, [](double x) { return 0.5 + std::atan(x) / std::numbers::pi; }, kLevel).rejected());
  const auto g3 = draw(100000, 3, [](RngStream& r) { return sample_gamma(3.0, r); });
  CHECK(within_se(estimate_mean(g3), 3.0));
  const auto g02 = draw(100000, 4, [](RngStream& r) { return sample_gamma(0.2, r); });
  CHECK(within_se(estimate_mean(g02), 0.2));
  const auto n = draw(50000, 5, [](RngStream& r) { return sample_basic(BasicLaw::normal, {2.0}, r); });
  CHECK_FALSE(ks_one_sample(n, [](double x) { return normal_cdf(x / 2.0); }, kLevel).rejected());
  const auto e = draw(50000, 6, [](RngStream& r) { return sample_basic(BasicLaw::exponential, {4.0}, r); });
  CHECK(within_se(estimate_mean(e), 0.25));
}

TEST_CASE("K has Laplace transform f_m") {
  const auto k2 = draw(100000, 10, [](RngStream& r) { return sample_K(ggc_coeffs(2), r); });
  CHECK(within_se(mean_of(k2, [](double x) { return std::exp(-x); }), 1.0 / 3.0));
  const auto k1 = draw(100000, 11, [](RngStream& r) { return sample_K(ggc_coeffs(1), r); });
  CHECK(within_se(mean_of(k1, [](double x) { return std::exp(-x); }), 1.0 / std::sqrt(2.0)));
  const auto k3 = draw(100000, 12, [](RngStream& r) { return sample_K(ggc_coeffs(3), r); });
  CHECK(within_se(estimate_mean(k3), 4.5));
  for (int m : {4, 7}) {
    const auto spec = ggc_coeffs(m);
    const auto k = draw(100000, 13 + m, [&](RngStream& r) { return sample_K(spec, r); });
    for (double x : {0.3, 1.5}) {
      CHECK(within_se(mean_of(k, [x](double v) { return std::exp(-x * v); }), f_m(x, m)));
    }
  }
}

TEST_CASE("X2c") {
  const double pi = std::numbers::pi;
  const auto x1 = draw(100000, 20, [&](RngStream& r) { return sample_X2c(pi / 2, r); });
  CHECK_FALSE(ks_one_sample(x1, [](double v) { return 1.0 - std::exp(-v); }, kLevel).rejected());
  const auto x2 = draw(100000, 21, [&](RngStream& r) { return sample_X2c(pi / 4, r); });
  CHECK(within_se(mean_of(x2, [](double v) { return std::exp(-v); }), 0.235702));
  CHECK(glt_rhs(GltKind::double_barrier, 1.0, {pi / 4, 1.0}) == Approx(0.235702).epsilon(1e-5));
  RngStream rng(0, 0);
  CHECK_THROWS_AS(sample_X2c(1.0, rng), std::invalid_argument);
}

TEST_CASE("first passage") {
  const auto t = draw(100000, 30, [](RngStream& r) { return sample_first_passage(1.0, r); });
  CHECK(median(t) == Approx(1.0 / kMedianChiSquare1).epsilon(0.02));
  CHECK(within_se(mean_of(t, [](double v) { return v <= 1.0 ? 1.0 : 0.0; }), 0.317311));
  const auto s = draw(100000, 31, [](RngStream& r) { return sample_first_passage(3.0, r) / 9.0; });
  CHECK_FALSE(ks_two_sample(t, s, kLevel).rejected());
  CHECK_FALSE(ks_one_sample(t, [](double u) { return first_passage_cdf(1.0, u); }, kLevel).rejected());
}

TEST_CASE("yor right-hand side") {
  const auto p = make_yor_params(2.0, 0.0);
  CHECK(p.a == Approx(1.0));
  CHECK(p.b == Approx(1.0));
  const auto q = make_yor_params(2.0, 1.0);
  CHECK(q.a == Approx(0.5 + std::sqrt(5.0) / 2));
  CHECK(q.b == Approx(q.a - 1.0));
  // (1 - U) / (2 e) at a = b = 1: P(V <= v) = 2v (1 - exp(-1/(2v)))
  const auto v = draw(50000, 40, [&](RngStream& r) { return sample_yor_rhs(p, r); });
  const auto cdf = [](double x) { return 2.0 * x * (1.0 - std::exp(-1.0 / (2.0 * x))); };
  CHECK_FALSE(ks_one_sample(v, cdf, kLevel).rejected());
  const auto big = draw(20000, 41, [](RngStream& r) { return sample_yor_rhs(make_yor_params(1e6, 0.0), r); });
  CHECK(median(big) < 1e-2);
}

TEST_CASE("length-biased expectation") {
  const auto e = draw(200000, 50, [](RngStream& r) { return r.exponential(); });
  const auto plain = biased_expectation(e, 0.0, [](double x) { return x; });
  CHECK(plain.mean == Approx(estimate_mean(e).mean).epsilon(1e-12));
  const auto one = biased_expectation(e, 1.0, [](double) { return 1.0; });
  CHECK(one.mean == Approx(1.0).epsilon(1e-12));
  const auto m = biased_expectation(e, 1.0, [](double x) { return x; });
  CHECK(within_se(m, 2.0));
  CHECK(biased_effective_size(e, 0.0) == Approx(200000.0));
  CHECK(biased_effective_size(e, 1.0) < 200000.0);
  CHECK(biased_effective_size(e, 1.0) == Approx(100000.0).epsilon(0.02));
}

TEST_CASE("stable subordinator") {
  const double dt = 0.7;
  const auto s = draw(100000, 60, [&](RngStream& r) { return sample_stable_subordinator_increment(0.5, dt, r); });
  CHECK(within_se(mean_of(s, [](double x) { return std::exp(-x); }), std::exp(-dt)));
  // At index 1/2, S_dt has the law dt^2 / (4 G_{1/2}) = dt^2 / (2 N^2).
  const auto ref = draw(100000, 61, [&](RngStream& r) {
    const double z = r.normal();
    return dt * dt / (2.0 * z * z);
  });
  CHECK_FALSE(ks_two_sample(s, ref, kLevel).rejected());
  const auto s2 = draw(50000, 62, [&](RngStream& r) { return sample_stable_subordinator_increment(0.75, 2 * dt, r); });
  const auto pair = draw(50000, 63, [&](RngStream& r) {
    return sample_stable_subordinator_increment(0.75, dt, r) + sample_stable_subordinator_increment(0.75, dt, r);
  });
  CHECK_FALSE(ks_two_sample(s2, pair, kLevel).rejected());
  for (double a : {0.3, 0.75, 0.95}) {
    const auto x = draw(100000, 64, [&](RngStream& r) { return sample_stable_subordinator_increment(a, 1.0, r); });
    CHECK(within_se(mean_of(x, [](double v) { return std::exp(-2.0 * v); }), std::exp(-std::pow(2.0, a))));
  }
}

TEST_CASE("KS machinery") {
  const auto a = draw(10000, 70, [](RngStream& r) { return r.normal(); });
  const auto b = draw(10000, 71, [](RngStream& r) { return r.normal(); });
  const auto c = draw(10000, 72, [](RngStream& r) { return sample_cauchy(1.0, r); });
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  const auto ab = ks_two_sample(a, b);
  CHECK(ab.threshold == Approx(0.0192).epsilon(0.01));
  CHECK_FALSE(ab.rejected());
  CHECK(ks_two_sample(a, c).rejected());
  CHECK(ks_two_sample(a, b, 0.05, 1.5).threshold == Approx(0.0288).epsilon(0.01));
  CHECK(ks_coefficient(0.05) == Approx(1.358).epsilon(1e-3));
  int accepted = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const auto x = draw(10000, 100 + 2 * rep, [](RngStream& r) { return r.normal(); });
    const auto y = draw(10000, 101 + 2 * rep, [](RngStream& r) { return r.normal(); });
    accepted += ks_two_sample(x, y).rejected() ? 0 : 1;
  }
  CHECK(accepted >= 36);
  std::vector<double> w(a.size(), 1.0);
  CHECK(ks_weighted(a, w, normal_cdf).statistic == Approx(ks_one_sample(a, normal_cdf).statistic).epsilon(1e-12));
  CHECK(quantile(std::vector<double>{1, 2, 3, 4}, 0.5) == Approx(2.5));
  CHECK(correlation(a, a) == Approx(1.0));
}
