#include "turnover/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "turnover/equilibria.hpp"
#include "turnover/simulate.hpp"

namespace turnover {

ThetaSolution solve_theta(double alpha, double gamma) {
  const double s = alpha + gamma;  // 1 + beta
  if (!(gamma < 0.0) || !(s > 1.0) || !(alpha > 0.0)) {
    throw Error(ErrorKind::NoTheta, "theta > 1 needs gamma < 0 and alpha + gamma > 1");
  }
  const double scale = alpha * -gamma;
  ThetaSolution root;
  root.L = (alpha * alpha + gamma * gamma - 1.0) / scale;
  // L - 2 = ((alpha + gamma)^2 - 1) / (alpha |gamma|), free of cancellation near L = 2.
  const double excess = (s - 1.0) * (s + 1.0) / scale;
  if (!(excess > 0.0)) throw Error(ErrorKind::NoTheta, "theta + 1/theta = L needs L > 2");
  const double disc = std::sqrt(excess * (excess + 4.0));  // sqrt(L^2 - 4)
  root.theta = 0.5 * (root.L + disc);
  // (L - disc) / 2 rewritten so that neither small nor large L cancels.
  root.theta_inv = 2.0 / (root.L + disc);
  return root;
}

bool necessary_condition(double theta, double b2, double d2) {
  const bool below_birth = theta < 1.0 + b2 - d2;
  const bool below_survival = d2 >= 1.0 || theta < 1.0 / (1.0 - d2);
  return below_birth && below_survival;
}

double verify_orbit(const CompetitionModel& model, const StateVector& p, const StateVector& q) {
  auto gap = [](const StateVector& a, const StateVector& b) {
    double g = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
    return g;
  };
  return std::max(gap(step(model, p), q), gap(step(model, q), p));
}

Period2Result construct_period2(const CompetitionModel& model) {
  if (model.k != 2) throw Error(ErrorKind::DimensionMismatch, "period-two construction needs k = 2");
  const auto order = turnover_order(model.strategies);
  const std::size_t top = order[0];
  const std::size_t other = order[1];
  const double b1 = model.strategies.b[top];
  const double d1 = model.strategies.d[top];
  const double b2 = model.strategies.b[other];
  const double d2 = model.strategies.d[other];

  Period2Result result;
  result.dominant = top;
  result.coeff = pair_coefficients(b1, d1, b2, d2);
  const auto& coeff = result.coeff;
  if (excluded(coeff)) {
    result.failed = "no_theta";
    return result;
  }

  const auto root = solve_theta(coeff.alpha, coeff.gamma);
  result.theta = root.theta;
  result.ewko = necessary_condition(root.theta, b2, d2);
  if (!*result.ewko) {
    result.failed = "ewko";
    return result;
  }

  PeriodTwoOrbit orbit;
  orbit.coeff = coeff;
  orbit.theta = root.theta;
  orbit.theta_inv = root.theta_inv;
  orbit.m1 = (root.theta + d2 - 1.0) / b2;
  orbit.m2 = (root.theta_inv + d2 - 1.0) / b2;
  if (!(orbit.m1 > 0.0 && orbit.m1 < 1.0 && orbit.m2 > 0.0 && orbit.m2 < 1.0)) {
    result.failed = "m_range";
    return result;
  }

  const double ratio = coeff.alpha * root.theta + coeff.gamma;
  const auto& kernel = model.kernel;
  if (kernel.has_profile()) {
    orbit.p1 = profile_inverse(kernel, orbit.m1);
    orbit.p2 = profile_inverse(kernel, orbit.m2);
    // <w, odd> = p1 and <w, even> = p2, linear in (w1 c1, w2 c2).
    const double den = ratio - root.theta;
    orbit.c1 = (orbit.p2 - orbit.p1 * root.theta) / (den * kernel.weight(top));
    orbit.c2 = (orbit.p1 * ratio - orbit.p2) / (den * kernel.weight(other));
    result.ewkw3 = orbit.p1 * root.theta < orbit.p2 && orbit.p2 < orbit.p1 * ratio;
  } else {
    // Decreasing nest-site branch: K - sum x = m (sum b_i x_i) at both points.
    const double bt = kernel.births[top];
    const double bo = kernel.births[other];
    const double a11 = 1.0 + orbit.m1 * bt;
    const double a12 = 1.0 + orbit.m1 * bo;
    const double a21 = (1.0 + orbit.m2 * bt) * ratio;
    const double a22 = (1.0 + orbit.m2 * bo) * root.theta;
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) <= 1e-14 * std::abs(a11 * a22)) {
      throw Error(ErrorKind::KernelNotInvertible, "nest-site level-set system is singular");
    }
    orbit.c1 = kernel.K * (a22 - a12) / det;
    orbit.c2 = kernel.K * (a11 - a21) / det;
    orbit.p1 = orbit.c1 + orbit.c2;
    orbit.p2 = orbit.c1 * ratio + orbit.c2 * root.theta;
    result.ewkw3 = orbit.c1 > 0.0 && orbit.c2 > 0.0;
  }
  if (!*result.ewkw3) {
    result.failed = "ewkw3";
    return result;
  }

  orbit.point_odd.assign(2, 0.0);
  orbit.point_even.assign(2, 0.0);
  orbit.point_odd[top] = orbit.c1;
  orbit.point_odd[other] = orbit.c2;
  orbit.point_even[top] = orbit.c1 * ratio;
  orbit.point_even[other] = orbit.c2 * root.theta;

  if (!kernel.has_profile() &&
      (kernel_branch(model, orbit.point_odd) != 1 || kernel_branch(model, orbit.point_even) != 1)) {
    result.failed = "branch";
    return result;
  }
  orbit.residual = verify_orbit(model, orbit.point_odd, orbit.point_even);
  result.orbit = std::move(orbit);
  return result;
}

namespace {

constexpr double kJacobianStep = 1e-7;
constexpr int kMaxNewton = 50;
constexpr double kUpdateTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kInteriorFloor = 1e-6;

double sup_norm(const StateVector& x) {
  double n = 0.0;
  for (double v : x) n = std::max(n, std::abs(v));
  return n;
}

double sup_distance(const StateVector& a, const StateVector& b) {
  double n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) n = std::max(n, std::abs(a[i] - b[i]));
  return n;
}

std::optional<StateVector> newton_period2(const CompetitionModel& model, StateVector x,
                                          double radius) {
  const auto twice = [&](const StateVector& y) { return step(model, step(model, y)); };
  for (int it = 0; it < kMaxNewton; ++it) {
    const auto image = twice(x);
    const double f0 = image[0] - x[0];
    const double f1 = image[1] - x[1];
    auto jac = finite_difference_jacobian(twice, x, kJacobianStep);
    jac(0, 0) -= 1.0;
    jac(1, 1) -= 1.0;
    const double det = jac(0, 0) * jac(1, 1) - jac(0, 1) * jac(1, 0);
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const double dx0 = (-f0 * jac(1, 1) + f1 * jac(0, 1)) / det;
    const double dx1 = (-f1 * jac(0, 0) + f0 * jac(1, 0)) / det;
    x[0] += dx0;
    x[1] += dx1;
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) return std::nullopt;
    if (sup_norm(x) > 10.0 * radius) return std::nullopt;
    if (std::max(std::abs(dx0), std::abs(dx1)) <= kUpdateTol * std::max(1.0, sup_norm(x))) break;
  }
  return x;
}

}  // namespace

std::vector<OrbitPair> search_period2(const CompetitionModel& model, std::size_t grid,
                                      std::uint64_t seed) {
  if (model.k != 2) throw Error(ErrorKind::DimensionMismatch, "period-two search needs k = 2");
  if (grid == 0) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  const auto region = invariant_bound(model);
  const double radius = region.M_bar;
  // Beyond pressure M no coordinate grows, so a two-cycle with both points out
  // there would be a fixed point: every orbit has a point in the smaller simplex.
  double seed_radius = region.M;
  if (model.kernel.has_profile()) {
    seed_radius /= std::min(model.kernel.weight(0), model.kernel.weight(1));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);

  std::vector<OrbitPair> found;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double u = jitter(rng);
      const double v = jitter(rng);
      StateVector start{(i + u) / grid * seed_radius, (j + v) / grid * seed_radius};
      if (start[0] + start[1] > seed_radius) continue;

      const auto root = newton_period2(model, start, radius);
      if (!root) continue;
      const auto& x = *root;
      const auto image = step(model, x);
      const double scale = std::max(1.0, sup_norm(x));
      if (x[0] <= kInteriorFloor || x[1] <= kInteriorFloor) continue;
      if (image[0] <= kInteriorFloor || image[1] <= kInteriorFloor) continue;
      if (sup_distance(image, x) <= 1e-8 * scale) continue;  // fixed point of T
      const double residual = verify_orbit(model, x, image);
      if (!(residual < kResidualTol)) continue;

      OrbitPair pair{x, image, residual};
      if (pair.q < pair.p) std::swap(pair.p, pair.q);
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const OrbitPair& o) {
        return sup_distance(o.p, pair.p) <= 1e-6 * scale;
      });
      if (!duplicate) found.push_back(std::move(pair));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const OrbitPair& a, const OrbitPair& b) { return a.p < b.p; });
  return found;
}

FeasibilityReport asymptotic_feasibility(const CompetitionModel& model) {
  if (model.k != 2) throw Error(ErrorKind::DimensionMismatch, "feasibility needs k = 2");
  FeasibilityReport report;
  const auto& kernel = model.kernel;
  if (!kernel.has_profile()) {
    report.form = "not applicable: nest_site is not a profile of total size";
    return report;
  }
  const auto order = turnover_order(model.strategies);
  const double b1 = model.strategies.b[order[0]];
  const double b2 = model.strategies.b[order[1]];
  const double d2 = model.strategies.d[order[1]];
  const double alpha = b1 / b2;

  report.applicable = true;
  report.A = profile_inverse(kernel, d2 / b2);
  report.B = 1.0 / profile_derivative(kernel, report.A);
  const double centre = -2.0 * report.B / b2;
  report.lower_gap = centre - report.A;
  report.upper_gap = alpha * report.A - centre;
  report.holds = report.lower_gap > 0.0 && report.upper_gap > 0.0;

  switch (kernel.family) {
    case KernelFamily::Logistic:
      report.form = "2 b2/b1 < b2 - d2 < 2";
      report.margin = std::min((b2 - d2) - 2.0 * b2 / b1, 2.0 - (b2 - d2));
      break;
    case KernelFamily::BevertonHolt:
      report.form = "b2 - d2 < 2 b2/d2 and b1 > 2 b2^2 / ((b2 - d2) d2)";
      report.margin = std::min(2.0 * b2 / d2 - (b2 - d2), b1 - 2.0 * b2 * b2 / ((b2 - d2) * d2));
      break;
    case KernelFamily::Ricker:
      report.form = "d2 exp(2/(alpha d2)) < b2 < d2 exp(2/d2)";
      report.margin = std::min(b2 - d2 * std::exp(2.0 / (alpha * d2)), d2 * std::exp(2.0 / d2) - b2);
      break;
    case KernelFamily::NestSite: break;
  }
  return report;
}

}  // namespace turnover
