#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "turnover/periodic.hpp"
#include "turnover/simulate.hpp"

using namespace turnover;
using namespace turnover::testing;

namespace {

double sup_distance(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CompetitionModel ricker_example() {
  const double b1 = 1.0001 * std::exp(2.0);
  return with_kernel(KernelFamily::Ricker, {b1, b1 / 4}, {0.9999, 0.25});
}

}  // namespace

TEST_CASE("solve_theta examples") {
  const auto ex = solve_theta(4, -2.9999);
  CHECK(ex.theta == doctest::Approx(1.0040910).epsilon(1e-7));
  CHECK(std::abs(ex.theta - 1.00408) < 2e-5);

  const auto t = solve_theta(4, -2.8);
  CHECK(t.L == doctest::Approx(22.84 / 11.2).epsilon(1e-15));
  CHECK(t.theta == doctest::Approx(1.218820054940319).epsilon(1e-14));
  CHECK(t.theta_inv == doctest::Approx(0.8204656593453956).epsilon(1e-14));

  // Nearly tied: L -> 2 and theta -> 1 from above.
  const auto near = solve_theta(4, -2.99999999);
  CHECK(near.theta > 1.0);
  CHECK(near.theta - 1.0 < 1e-3);

  CHECK_THROWS_AS(solve_theta(4, -3.0), Error);  // alpha + gamma = 1
  CHECK_THROWS_AS(solve_theta(0.5, 0.6), Error);
}

TEST_CASE("theta identity and reciprocal hold for random coefficients") {
  std::mt19937_64 rng(41);
  for (int s = 0; s < 10000; ++s) {
    const double alpha = uniform(rng, 1.0001, 10.0);
    // gamma in (1 - alpha, 0), with excess over the edge spread over many decades.
    const double excess = (alpha - 1.0) * std::pow(10.0, uniform(rng, -8.0, 0.0));
    const double gamma = std::min(1.0 - alpha + excess, -1e-9);
    const auto r = solve_theta(alpha, gamma);
    REQUIRE(r.theta > 1.0);
    REQUIRE(std::abs((alpha * r.theta + gamma) * (alpha * r.theta_inv + gamma) - 1.0) < 1e-12);
    REQUIRE(std::abs(r.theta_inv - 1.0 / r.theta) < 1e-12);
  }
}

TEST_CASE("necessary_condition examples") {
  CHECK(necessary_condition(1.218821, 1, 0.3));
  CHECK(necessary_condition(1.5, 1, 0.4));       // 1.5 < 1.6 and 1.5 < 1.6667
  CHECK_FALSE(necessary_condition(1.5, 0.8, 0.4));  // 1.5 >= 1.4
  CHECK_FALSE(necessary_condition(1.7, 2, 0.4));    // 1.7 < 2.6 but 1.7 >= 1/(1 - 0.4)
  CHECK(necessary_condition(1.4, 1.5, 1.0));        // second bound vacuous
  CHECK_FALSE(necessary_condition(1.6, 1.5, 1.0));
}

TEST_CASE("construct_period2 builds the (4,1) orbit") {
  const auto model = logistic({4, 1}, {1, 0.3});
  const auto res = construct_period2(model);
  REQUIRE(res.orbit.has_value());
  CHECK(res.failed.empty());
  const auto& o = *res.orbit;
  CHECK(o.theta == doctest::Approx(1.218821).epsilon(1e-6));
  CHECK(o.p1 == doctest::Approx(0.481179).epsilon(2e-6));
  CHECK(o.p2 == doctest::Approx(0.879534341).epsilon(1e-8));
  CHECK(o.c1 == doctest::Approx(0.34217887254808743).epsilon(1e-13));
  CHECK(o.c2 == doctest::Approx(0.1390010725115935).epsilon(1e-13));
  CHECK(std::abs(o.c1 - 0.342180) < 2e-5);
  CHECK(std::abs(o.c2 - 0.138996) < 2e-5);
  CHECK(std::abs(o.point_even[0] - 0.710128) < 2e-5);
  CHECK(std::abs(o.point_even[1] - 0.169412) < 2e-5);
  CHECK(o.residual < 1e-10);
  CHECK(*res.ewko);
  CHECK(*res.ewkw3);

  // Level sets and ratio structure.
  CHECK(std::abs(o.c1 + o.c2 - o.p1) < 1e-12);
  CHECK(std::abs(o.c1 * (o.coeff.alpha * o.theta + o.coeff.gamma) + o.c2 * o.theta - o.p2) < 1e-12);
  CHECK(o.p1 * o.theta < o.p2);
  CHECK(o.p2 < o.p1 * (o.coeff.alpha * o.theta + o.coeff.gamma));
}

TEST_CASE("construct_period2 builds the (2.525,0.505) orbit") {
  const auto res = construct_period2(logistic({2.525, 0.505}, {0.0499, 0.01}));
  REQUIRE(res.orbit.has_value());
  const auto& o = *res.orbit;
  CHECK(o.theta == doctest::Approx(1.0031674).epsilon(1e-7));
  CHECK(std::abs(o.c1 - 0.739219) < 2e-6);
  CHECK(std::abs(o.c2 - 0.234705) < 2e-6);
  CHECK(std::abs(o.point_even[0] - 0.751000) < 2e-6);
  CHECK(std::abs(o.point_even[1] - 0.235448) < 2e-6);
  CHECK(o.residual < 1e-10);
}

TEST_CASE("construct_period2 reports the first failed condition") {
  const auto ex1 = construct_period2(logistic({2.02, 0.505}, {0.0399, 0.01}));
  CHECK_FALSE(ex1.orbit.has_value());
  CHECK(ex1.failed == "ewkw3");
  CHECK(*ex1.ewko);
  CHECK_FALSE(*ex1.ewkw3);
  CHECK(*ex1.theta == doctest::Approx(1.0040909955).epsilon(1e-9));

  const auto ex3 = construct_period2(ricker_example());
  CHECK(ex3.failed == "ewkw3");

  const auto excl = construct_period2(logistic({2, 3}, {0.5, 0.9}));
  CHECK(excl.failed == "no_theta");
  CHECK_FALSE(excl.theta.has_value());

  // Dominant in the second slot: the orbit is reported in model order.
  const auto swapped = construct_period2(logistic({1, 4}, {0.3, 1}));
  REQUIRE(swapped.orbit.has_value());
  CHECK(swapped.dominant == 1);
  CHECK(swapped.orbit->point_odd[1] == doctest::Approx(0.34217887254808743).epsilon(1e-13));

  CHECK_THROWS_AS(construct_period2(logistic({4, 1, 2}, {1, 0.3, 0.9})), Error);
  CHECK_THROWS_AS(construct_period2(logistic({2, 1}, {1, 0.5})), Error);
}

TEST_CASE("the printed orbits of the worked examples are not orbits") {
  const auto ex1 = logistic({2.02, 0.505}, {0.0399, 0.01});
  CHECK(verify_orbit(ex1, {0.8482, 0.1099}, {0.8622, 0.1103}) > 1e-2);

  // Multiplier of the dominated strategy at the printed point is far from theta.
  const auto m = ricker_example();
  const auto res = construct_period2(m);
  CHECK(*res.theta == doctest::Approx(1.00409).epsilon(1e-5));
  const StateVector odd{1.49009, 0.000868};
  const double multiplier = step(m, odd)[1] / odd[1];
  CHECK(multiplier == doctest::Approx(1.166).epsilon(1e-3));
  CHECK(verify_orbit(m, odd, {1.51455, 0.000871}) > 1e-2);
}

TEST_CASE("verify_orbit examples") {
  const auto one = logistic({1.5}, {0.5});
  CHECK(verify_orbit(one, {2.0 / 3.0}, {2.0 / 3.0}) <= 1e-15);

  const auto model = logistic({4, 1}, {1, 0.3});
  const auto o = *construct_period2(model).orbit;
  CHECK(verify_orbit(model, o.point_odd, o.point_even) < 1e-10);
  auto moved = o.point_odd;
  moved[0] += 0.01;
  CHECK(verify_orbit(model, moved, o.point_even) > 1e-3);
}

TEST_CASE("search_period2 examples") {
  const auto model = logistic({4, 1}, {1, 0.3});
  const auto found = search_period2(model, 30);
  REQUIRE(found.size() == 1);
  const auto o = *construct_period2(model).orbit;
  CHECK(sup_distance(found[0].p, o.point_odd) < 1e-8);
  CHECK(sup_distance(found[0].q, o.point_even) < 1e-8);
  CHECK(found[0].residual < 1e-10);

  CHECK(search_period2(logistic({2, 3}, {0.5, 0.9}), 30).empty());

  // One persistent strategy with b < 2 + d next to an excluded one.
  const auto axis_only = logistic({1.5, 1.2}, {0.5, 0.9});
  REQUIRE(exclusion_predicate(axis_only).pairs[0].excluded);
  CHECK(search_period2(axis_only, 30).empty());
  CHECK_THROWS_AS(search_period2(logistic({1.5}, {0.5}), 30), Error);

  // Deterministic for a fixed seed.
  const auto again = search_period2(model, 30);
  CHECK(again[0].p == found[0].p);
}

TEST_CASE("asymptotic_feasibility examples") {
  const auto ex1 = asymptotic_feasibility(logistic({2.02, 0.505}, {0.0399, 0.01}));
  CHECK(ex1.applicable);
  CHECK_FALSE(ex1.holds);
  CHECK(ex1.margin == doctest::Approx(-0.005).epsilon(1e-9));

  const auto big = asymptotic_feasibility(logistic({4, 1}, {1, 0.3}));
  CHECK(big.holds);
  CHECK(big.margin == doctest::Approx(0.2).epsilon(1e-12));

  const auto ex3 = asymptotic_feasibility(ricker_example());
  CHECK(ex3.holds);
  CHECK(ex3.margin == doctest::Approx(0.25 * std::exp(2.0) * 1e-4).epsilon(1e-6));

  const auto ns = asymptotic_feasibility(with_kernel(KernelFamily::NestSite, {4, 1}, {1, 0.3}));
  CHECK_FALSE(ns.applicable);
}

TEST_CASE("construction, search and iteration agree on random models") {
  std::mt19937_64 rng(42);
  constexpr KernelFamily kFamilies[] = {KernelFamily::Logistic, KernelFamily::Ricker,
                                        KernelFamily::BevertonHolt};
  int with_orbit = 0, without = 0;
  for (int n = 0; n < 100; ++n) {
    const KernelFamily family = kFamilies[n % 3];
    const double alpha = uniform(rng, 2.0, 6.0);
    const double beta = uniform(rng, 0.001, 0.05);
    const double d1 = uniform(rng, 0.3, 1.0 - beta);
    const double d2 = (d1 + beta) / alpha;
    // Place b2 around the window where period-two orbits are expected.
    const double b2 = family == KernelFamily::Ricker
                          ? d2 * std::exp(2.0 / (alpha * d2)) * uniform(rng, 0.8, 1.5)
                          : uniform(rng, d2 + 0.3, 2.0);
    const auto m = with_kernel(family, {alpha * b2, b2}, {d1, d2}, uniform(rng, 0.5, 2.0));

    const auto built = construct_period2(m);
    const auto found = search_period2(m, 30);
    CAPTURE(n);
    CAPTURE(built.failed);
    REQUIRE(found.size() == (built.orbit ? 1u : 0u));
    if (!built.orbit) {
      ++without;
      continue;
    }
    ++with_orbit;
    const auto& o = *built.orbit;
    auto lo = o.point_odd, hi = o.point_even;
    if (hi < lo) std::swap(lo, hi);
    REQUIRE(sup_distance(found[0].p, lo) < 1e-6);
    REQUIRE(sup_distance(found[0].q, hi) < 1e-6);

    // Closure under the map, and the coupling ratio at period two.
    REQUIRE(verify_orbit(m, o.point_odd, o.point_even) < 1e-9);
    REQUIRE(sup_distance(step(m, o.point_odd), o.point_even) < 1e-9);
    const double r1 = o.point_even[0] / o.point_odd[0];
    const double r2 = o.point_even[1] / o.point_odd[1];
    REQUIRE(std::abs(r1 - (o.coeff.alpha * r2 + o.coeff.gamma)) < 1e-12);
  }
  CHECK(with_orbit >= 10);
  CHECK(without >= 10);
}
