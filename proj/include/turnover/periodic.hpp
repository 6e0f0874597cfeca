#pragma once

// Period-two coexistence orbits of the two-strategy map.
//
// An interior period-two orbit alternates between (c1, c2) and
// (c1 (alpha theta + gamma), c2 theta), where theta > 1 solves
// (alpha theta + gamma)(alpha / theta + gamma) = 1. Fixing theta turns the
// orbit conditions into two level-set equations for f:
//
//   f(c1, c2) = m1 = (theta + d2 - 1) / b2
//   f(c1 (alpha theta + gamma), c2 theta) = m2 = (1/theta + d2 - 1) / b2
//
// which, for f = phi(<w, x>), are linear in (c1, c2) once p_i = phi^{-1}(m_i)
// is known.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "turnover/exclusion.hpp"
#include "turnover/model.hpp"

namespace turnover {

struct ThetaSolution {
  double L = 0.0;          // theta + 1/theta
  double theta = 0.0;      // > 1
  double theta_inv = 0.0;  // L - theta
};

/// Throws NoTheta unless gamma < 0 and alpha + gamma > 1.
ThetaSolution solve_theta(double alpha, double gamma);

/// theta < 1 + b2 - d2 and theta < 1/(1 - d2); the second is vacuous at d2 = 1.
bool necessary_condition(double theta, double b2, double d2);

struct PeriodTwoOrbit {
  PairCoefficients coeff;
  double theta = 0.0;
  double theta_inv = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  StateVector point_odd;   // in the model's own strategy order
  StateVector point_even;  // step(point_odd)
  double residual = 0.0;
};

/// Outcome of the closed-form construction. `failed` names the first
/// violated condition, in pipeline order:
///   "no_theta"  alpha <= 1 + beta
///   "ewko"      theta too large for f to stay inside (0, 1)
///   "m_range"   m1 or m2 outside (0, 1)
///   "ewkw3"     the level-set system has no positive solution
///   "branch"    (nest_site) a solution point is off the decreasing branch
struct Period2Result {
  std::optional<PeriodTwoOrbit> orbit;
  std::string failed;
  std::size_t dominant = 0;  // zero-based index of the higher-turnover strategy
  PairCoefficients coeff;
  std::optional<double> theta;
  std::optional<bool> ewko;
  std::optional<bool> ewkw3;
};

/// Requires k == 2 (DimensionMismatch) and distinct turnovers (TiedTurnover).
Period2Result construct_period2(const CompetitionModel& model);

/// max(|T(p) - q|_inf, |T(q) - p|_inf)
double verify_orbit(const CompetitionModel& model, const StateVector& p, const StateVector& q);

struct OrbitPair {
  StateVector p;  // lexicographically smaller point
  StateVector q;  // step(p)
  double residual = 0.0;
};

/// Newton search for interior period-two orbits from a jittered grid of
/// starting points in the simplex of pressure at most M (see invariant_bound).
/// Independent of the closed form.
std::vector<OrbitPair> search_period2(const CompetitionModel& model, std::size_t grid,
                                      std::uint64_t seed = 0);

/// Leading-order (small beta) feasibility of a period-two orbit,
/// A < -2B/b2 < alpha A with A = phi^{-1}(d2/b2), B = 1/phi'(A).
struct FeasibilityReport {
  bool applicable = false;  // false for nest_site
  bool holds = false;
  double A = 0.0;
  double B = 0.0;
  double lower_gap = 0.0;  // -2B/b2 - A
  double upper_gap = 0.0;  // alpha A + 2B/b2
  double margin = 0.0;     // signed slack of the family-specific form
  std::string form;
};

FeasibilityReport asymptotic_feasibility(const CompetitionModel& model);

}  // namespace turnover
