#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "turnover/exclusion.hpp"
#include "turnover/simulate.hpp"

using namespace turnover;
using namespace turnover::testing;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("turnover examples") {
  const auto L = turnover::turnover(StrategyParams{{2.02, 0.505}, {0.0399, 0.01}});
  CHECK(L[0] == doctest::Approx(50.6266).epsilon(1e-6));
  CHECK(L[1] == doctest::Approx(50.5));

  const auto L2 = turnover::turnover(StrategyParams{{4, 1}, {1, 0.3}});
  CHECK(L2[0] == 4.0);
  CHECK(L2[1] == doctest::Approx(10.0 / 3.0));

  CHECK(kind_of([] { turnover::turnover(StrategyParams{{2, 1}, {1, 0.5}}); }) == ErrorKind::TiedTurnover);
  CHECK(turnover_order(StrategyParams{{1, 4, 2}, {0.5, 1, 0.25}}) ==
        std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("pair_coefficients examples") {
  const auto ex = pair_coefficients(2.02, 0.0399, 0.505, 0.01);
  CHECK(ex.alpha == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ex.beta == doctest::Approx(0.0001).epsilon(1e-9));
  CHECK(ex.gamma == doctest::Approx(-2.9999).epsilon(1e-12));

  const auto p = pair_coefficients(4, 1, 1, 0.3);
  CHECK(p.alpha == 4.0);
  CHECK(p.beta == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(p.gamma == doctest::Approx(-2.8).epsilon(1e-14));

  // alpha = 1 with vanishing beta leaves gamma = beta.
  const auto unit = pair_coefficients(1, 0.5, 1, 0.5 + 1e-12);
  CHECK(unit.alpha == 1.0);
  CHECK(std::abs(unit.gamma) < 1e-11);

  CHECK(kind_of([] { pair_coefficients(1, 0.3, 4, 1); }) == ErrorKind::NonpositiveBeta);
}

TEST_CASE("exclusion_predicate examples") {
  const auto excl = exclusion_predicate(logistic({2, 3}, {0.5, 0.9}));
  CHECK(excl.dominant == 0);
  REQUIRE(excl.pairs.size() == 1);
  CHECK(excl.pairs[0].i == 1);
  CHECK(excl.pairs[0].coeff.alpha == doctest::Approx(2.0 / 3.0));
  CHECK(excl.pairs[0].coeff.beta == doctest::Approx(0.1));
  CHECK(excl.pairs[0].excluded);

  const auto open = exclusion_predicate(logistic({2.02, 0.505}, {0.0399, 0.01}));
  CHECK_FALSE(open.pairs[0].excluded);
  CHECK(open.note.find("does not show") != std::string::npos);

  // Dominance is decided by turnover, not by position.
  const auto swapped = exclusion_predicate(logistic({3, 2}, {0.9, 0.5}));
  CHECK(swapped.dominant == 1);
  CHECK(swapped.pairs[0].i == 0);
  CHECK(swapped.pairs[0].excluded);

  // alpha = 1 + beta exactly: b = (2, 1), d = (0.5, 0.75) gives alpha = 2, beta = 1.
  const auto edge = pair_coefficients(2, 0.5, 1, 0.75);
  CHECK(edge.alpha == 1.0 + edge.beta);
  CHECK(excluded(edge));

  CHECK_THROWS_AS(exclusion_predicate(logistic({2, 1}, {1, 0.5})), Error);
}

TEST_CASE("counterexample_sequences examples") {
  const PairCoefficients p = pair_coefficients(4, 1, 1, 0.3);
  const auto seq = counterexample_sequences(p, 1.0, 1.0, 4);
  REQUIRE(seq.u.size() == 4);
  CHECK(seq.u[0] == 1.0);
  CHECK(seq.u[1] == doctest::Approx(4 * seq.theta - 2.8).epsilon(1e-15));
  CHECK(seq.u[1] == doctest::Approx(2.0752802).epsilon(1e-7));
  CHECK(seq.u[2] == 1.0);
  CHECK(seq.u[3] == seq.u[1]);
  CHECK(seq.v[1] == doctest::Approx(1.218821).epsilon(1e-6));
  CHECK(seq.v[2] == 1.0);

  const auto ex = counterexample_sequences(pair_coefficients(2.02, 0.0399, 0.505, 0.01), 1, 1, 2);
  CHECK(ex.v[1] == doctest::Approx(1.0040910).epsilon(1e-7));

  CHECK(kind_of([] { counterexample_sequences(pair_coefficients(2, 0.5, 3, 0.9), 1, 1, 4); }) ==
        ErrorKind::NoTheta);
  CHECK(kind_of([&] { counterexample_sequences(p, 0.0, 1.0, 4); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("recurrence_residual examples") {
  const PairCoefficients p = pair_coefficients(4, 1, 1, 0.3);
  const auto seq = counterexample_sequences(p, 0.7, 0.3, 50);
  CHECK(recurrence_residual(seq.u, seq.v, p.alpha, p.beta) < 1e-12);

  const std::vector<double> flat(10, 2.5);
  CHECK(recurrence_residual(flat, flat, 3.0, 0.25) == 0.25);

  CHECK_THROWS_AS(recurrence_residual({1.0}, {1.0}, 1, 0), Error);
  CHECK_THROWS_AS(recurrence_residual({1.0, 2.0}, {1.0}, 1, 0), Error);
}

TEST_CASE("trajectories satisfy the coupling identity") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 0; n < 200; ++n) {
    const auto m = random_model(rng, family_at(n), 2);
    const auto report = exclusion_predicate(m);
    const std::size_t top = report.dominant, other = report.pairs[0].i;
    const auto traj = trajectory(m, random_state(rng, 2, 0.01, 1.0), 200);
    std::vector<double> u, v;
    for (const auto& x : traj.states) {
      if (!(x[0] > 0.0 && x[1] > 0.0)) break;
      u.push_back(x[top]);
      v.push_back(x[other]);
    }
    if (u.size() < 2) continue;
    const auto& c = report.pairs[0].coeff;
    REQUIRE(recurrence_residual(u, v, c.alpha, c.beta) < 1e-12);
  }
}

TEST_CASE("lemma examples") {
  // Brute force along x1 x2 = 4: (x + 1)(4/x + 1) = x + 4/x + 5.
  double best = INFINITY, arg = 0.0;
  for (int g = 1; g <= 100000; ++g) {
    const double x = 0.01 + g * 1e-4;
    const double v = lemma_product(1, 1, {x, 4 / x});
    if (v < best) best = v, arg = x;
  }
  CHECK(best == doctest::Approx(9.0).epsilon(1e-8));
  CHECK(arg == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(lemma_bound(1, 1, 2, 4) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(lemma_min_check(1, 1, 2, 4, 1000));

  // gamma = 0: g_n = alpha^n m everywhere on the constraint set.
  CHECK(lemma_product(1.5, 0, {2.0, 0.5, 3.0}) == doctest::Approx(std::pow(1.5, 3) * 3.0));
  CHECK(lemma_bound(1.5, 0, 3, 3.0) == doctest::Approx(std::pow(1.5, 3) * 3.0).epsilon(1e-14));
  CHECK(lemma_min_check(1.5, 0, 3, 3.0, 500));

  CHECK(lemma_bound(2, 0.5, 1, 3) == doctest::Approx(6.5).epsilon(1e-15));
  CHECK(lemma_min_check(2, 0.5, 1, 3, 10));

  CHECK_THROWS_AS(lemma_min_check(1, -0.1, 2, 4, 10), Error);
  CHECK_THROWS_AS(lemma_min_check(1, 1, 7, 4, 10), Error);
}

TEST_CASE("lemma check passes for random draws with gamma >= 0") {
  std::mt19937_64 rng(32);
  for (int s = 0; s < 1000; ++s) {
    const double alpha = std::exp(uniform(rng, -2.0, 2.0));
    const double gamma = s % 10 == 0 ? 0.0 : std::exp(uniform(rng, -3.0, 2.0));
    const int n = 1 + s % 6;
    const double m = std::exp(uniform(rng, -3.0, 3.0));
    REQUIRE(lemma_min_check(alpha, gamma, n, m, 200, static_cast<std::uint64_t>(s)));
  }
}

TEST_CASE("pair coefficient algebra") {
  std::mt19937_64 rng(33);
  for (int s = 0; s < 10000; ++s) {
    const double d1 = uniform(rng, 0.01, 1.0), di = uniform(rng, 0.01, 1.0);
    const double bi = di * uniform(rng, 1.01, 10.0);
    const double b1 = d1 * (bi / di) * uniform(rng, 1.001, 3.0);
    const auto p = pair_coefficients(b1, d1, bi, di);
    REQUIRE(p.beta > 0.0);
    REQUIRE(std::abs(p.alpha + p.gamma - 1.0 - p.beta) <= 1e-15 * std::max(1.0, p.alpha));
    // Equivalent form of the verdict.
    if (std::abs(b1 * (1 - di) - bi * (1 - d1)) > 1e-9 * b1) {
      REQUIRE(excluded(p) == (b1 * (1 - di) <= bi * (1 - d1)));
    }
  }
}

TEST_CASE("counterexample sequences stay bounded away from zero") {
  std::mt19937_64 rng(34);
  int built = 0;
  while (built < 200) {
    const double alpha = uniform(rng, 1.2, 8.0);
    const double beta = uniform(rng, 1e-4, 0.9) * (alpha - 1.0);
    const PairCoefficients p{alpha, beta, beta + 1.0 - alpha};
    const double c1 = uniform(rng, 0.01, 2.0), c2 = uniform(rng, 0.01, 2.0);
    const auto seq = counterexample_sequences(p, c1, c2, 1001);
    const double ratio = alpha * seq.theta + p.gamma;
    REQUIRE(seq.theta > 1.0);
    REQUIRE(ratio > 0.0);
    const auto [ulo, uhi] = std::minmax_element(seq.u.begin(), seq.u.end());
    const auto [vlo, vhi] = std::minmax_element(seq.v.begin(), seq.v.end());
    REQUIRE(*ulo == std::min(c1, c1 * ratio));
    REQUIRE(*uhi == std::max(c1, c1 * ratio));
    REQUIRE(*vlo == c2);
    REQUIRE(*vhi == c2 * seq.theta);
    REQUIRE(recurrence_residual(seq.u, seq.v, alpha, beta) < 1e-12);
    ++built;
  }
}

TEST_CASE("excluded models lose the dominated strategy") {
  std::mt19937_64 rng(35);
  constexpr KernelFamily kFamilies[] = {KernelFamily::Logistic, KernelFamily::BevertonHolt,
                                        KernelFamily::Ricker};
  int models = 0;
  while (models < 50) {
    const auto m = random_model(rng, kFamilies[models % 3], 2);
    const auto report = exclusion_predicate(m);
    const auto& pair = report.pairs[0];
    // Keep turnovers separated so the decay finishes well inside the horizon.
    if (!pair.excluded || report.L[pair.i] > 0.9 * report.L[report.dominant]) continue;
    for (int s = 0; s < 20; ++s) {
      const auto traj = trajectory(m, random_state(rng, 2, 0.01, 1.0), 10000);
      const auto flags = extinction_diagnostics(traj);
      REQUIRE(flags[pair.i]);
      REQUIRE_FALSE(flags[report.dominant]);
    }
    ++models;
  }
}

TEST_CASE("euler_discretize examples") {
  const auto e = euler_discretize({4, 1}, {1, 0.3}, 0.5);
  CHECK(e.b == std::vector<double>{2, 0.5});
  CHECK(e.d == std::vector<double>{0.5, 0.15});
  CHECK(e.h_max == 1.0);
  CHECK(e.valid);

  CHECK_FALSE(euler_discretize({4, 1}, {1, 0.3}, 2).valid);
  CHECK(euler_discretize({4, 1}, {1, 0.3}, 1).valid);
  CHECK_THROWS_AS(euler_discretize({4, 1}, {1, 0.3}, 0.0), Error);
  CHECK_THROWS_AS(euler_discretize({4, 1}, {1}, 0.5), Error);
}

TEST_CASE("consistency_condition examples") {
  for (double h : {0.01, 0.5, 2.0, 100.0}) {
    const auto c = consistency_condition({1, 2}, {0.2, 0.5}, h);
    REQUIRE(c.size() == 1);
    CHECK(c[0].holds);
    CHECK(c[0].lhs == -1.0);
  }

  const auto half = consistency_condition({4, 1}, {1, 0.3}, 0.5);
  CHECK(half[0].lhs == 3.0);
  CHECK(half[0].rhs == doctest::Approx(0.1));
  CHECK_FALSE(half[0].holds);

  const auto big = consistency_condition({4, 1}, {1, 0.3}, 30);
  CHECK(big[0].rhs == doctest::Approx(6.0));
  CHECK(big[0].holds);
  CHECK_FALSE(euler_discretize({4, 1}, {1, 0.3}, 30).valid);

  CHECK(kind_of([] { consistency_condition({2, 1}, {1, 0.5}, 1); }) == ErrorKind::TiedTurnover);
}
