#include "windings/parallel.hpp"
#include "windings/rng.hpp"
#include "windings/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>
#include <vector>

using namespace windings;
using doctest::Approx;

TEST_CASE("philox known answers") {
  const auto z = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);
  const auto f = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(f[0] == 0x408f276du);
  CHECK(f[1] == 0x41c83b0eu);
  CHECK(f[2] == 0xa20bc7c6u);
  CHECK(f[3] == 0x6d5451fdu);
  const auto p = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(p[0] == 0xd16cfe09u);
  CHECK(p[1] == 0x94fdccebu);
  CHECK(p[2] == 0x5001e420u);
  CHECK(p[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3);
  RngStream b(7, 3);
  RngStream c(7, 4);
  RngStream d(8, 3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
    seen.insert(d());
  }
  CHECK(seen.size() == 3000);
  CHECK(derive_seed(42, "bougerol") == derive_seed(42, "bougerol"));
  CHECK(derive_seed(42, "bougerol") != derive_seed(42, "dufresne"));
  CHECK(derive_seed(42, "x") != derive_seed(43, "x"));
}

TEST_CASE("uniform lies in the open unit interval") {
  RngStream r(1, 0);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("moments of the basic variates") {
  RngStream r(11, 0);
  const int n = 1000000;
  std::vector<double> e(n);
  std::vector<double> z(n);
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    e[i] = r.exponential();
    z[i] = r.normal();
    u[i] = r.uniform();
  }
  CHECK(estimate_mean(e).mean == Approx(1.0).epsilon(3e-3));
  CHECK(within_se(estimate_mean(z), 0.0));
  std::vector<double> z2(n);
  for (int i = 0; i < n; ++i) z2[i] = z[i] * z[i];
  CHECK(within_se(estimate_mean(z2), 1.0));
  CHECK(within_se(estimate_mean(u), 0.5));
  CHECK_FALSE(ks_one_sample(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }).rejected());
}

TEST_CASE("parallel_map does not depend on the worker count") {
  auto fn = [](std::size_t i) {
    RngStream r(5, i);
    double s = 0;
    for (int k = 0; k < 10; ++k) s += r.normal();
    return s;
  };
  const auto one = parallel_map(1000, 1, fn);
  const auto eight = parallel_map(1000, 8, fn);
  CHECK(one == eight);
  CHECK(parallel_map(0, 4, fn).empty());
  CHECK_THROWS_AS(parallel_map(200, 4, [](std::size_t i) -> int {
                    if (i == 150) throw std::runtime_error("boom");
                    return 0;
                  }),
                  std::runtime_error);
}
