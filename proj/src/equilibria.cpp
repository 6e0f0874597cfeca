#include "turnover/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "turnover/exclusion.hpp"

namespace turnover {

Matrix finite_difference_jacobian(const VectorMap& map, const StateVector& x, double h) {
  const std::size_t n = x.size();
  Matrix jac(n, n);
  StateVector probe = x;
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = x[j] + h;
    const auto plus = map(probe);
    probe[j] = x[j] - h;
    const auto minus = map(probe);
    probe[j] = x[j];
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (plus[i] - minus[i]) / (2.0 * h);
  }
  return jac;
}

Matrix numeric_jacobian(const CompetitionModel& model, const StateVector& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "difference step must be positive");
  const int branch = kernel_branch(model, x);
  StateVector probe = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (double offset : {h, -h}) {
      probe[j] = x[j] + offset;
      if (kernel_branch(model, probe) != branch) {
        throw Error(ErrorKind::KinkProximity, "difference stencil crosses a kernel kink");
      }
    }
    probe[j] = x[j];
  }
  return finite_difference_jacobian([&](const StateVector& y) { return step(model, y); }, x, h);
}

Matrix analytic_jacobian(const CompetitionModel& model, const StateVector& x) {
  const std::size_t k = model.k;
  const double f = suppression(model, x);
  const auto grad = suppression_gradient(model, x);
  const auto& b = model.strategies.b;
  const auto& d = model.strategies.d;
  Matrix jac(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      jac(i, j) = (i == j ? 1.0 - d[i] + b[i] * f : 0.0) + b[i] * x[i] * grad[j];
    }
  }
  return jac;
}

double axis_fixed_point_bisection(const CompetitionModel& model, std::size_t r) {
  if (r == 0 || r > model.k) throw Error(ErrorKind::IndexOutOfRange, "axis index out of range");
  const std::size_t axis = r - 1;
  const double target = model.strategies.d[axis] / model.strategies.b[axis];
  auto gap = [&](double y) { return suppression(model, axis_state(model.k, axis, y)) - target; };

  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(ErrorKind::NonFiniteState, "axis profile never reaches d/b");
  }
  for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<StateVector> fixed_points(const CompetitionModel& model) {
  turnover(model.strategies);  // rejects ties
  const auto& kernel = model.kernel;
  std::vector<StateVector> points;
  points.emplace_back(model.k, 0.0);
  for (std::size_t axis = 0; axis < model.k; ++axis) {
    double y = 0.0;
    if (kernel.has_profile()) {
      const double level = model.strategies.d[axis] / model.strategies.b[axis];
      y = profile_inverse(kernel, level) / kernel.weight(axis);
      if (kernel.family == KernelFamily::Logistic && kernel.weight(axis) * y >= kernel.K) {
        throw Error(ErrorKind::KinkProximity, "logistic fixed point on the carrying-scale kink");
      }
    } else {
      y = axis_fixed_point_bisection(model, axis + 1);
    }
    points.push_back(axis_state(model.k, axis, y));
  }
  return points;
}

std::vector<double> analytic_eigenvalues(const CompetitionModel& model, std::size_t r) {
  if (r > model.k) throw Error(ErrorKind::IndexOutOfRange, "fixed point index out of range");
  const auto& b = model.strategies.b;
  const auto& d = model.strategies.d;
  std::vector<double> lambda(model.k);
  if (r == 0) {
    for (std::size_t i = 0; i < model.k; ++i) lambda[i] = 1.0 - d[i] + b[i];
    return lambda;
  }
  const std::size_t axis = r - 1;
  const auto point = fixed_points(model)[r];
  const double level = d[axis] / b[axis];
  for (std::size_t i = 0; i < model.k; ++i) lambda[i] = 1.0 - d[i] + b[i] * level;
  const auto grad = suppression_gradient(model, point);
  lambda[axis] = 1.0 + b[axis] * point[axis] * grad[axis];
  return lambda;
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Repulsive: return "repulsive";
    case Stability::LocallyStable: return "locally-stable";
    case Stability::SemiStable: return "semi-stable";
    case Stability::Unstable: return "unstable";
  }
  return "unknown";
}

Classification classify(const CompetitionModel& model, std::size_t r) {
  const auto lambda = analytic_eigenvalues(model, r);
  Classification c;
  c.marginal = std::any_of(lambda.begin(), lambda.end(),
                           [](double l) { return std::abs(l) == 1.0; });
  if (r == 0) {
    c.stability = Stability::Repulsive;
    return c;
  }
  const auto order = turnover_order(model.strategies);
  const bool dominant = order.front() == r - 1;
  const double term = lambda[r - 1] - 1.0;
  const bool axis_stable = term > -2.0 && term < 0.0;
  if (!axis_stable) {
    c.stability = Stability::Unstable;
  } else {
    c.stability = dominant ? Stability::LocallyStable : Stability::SemiStable;
  }
  return c;
}

FixedPointReport analyze_fixed_point(const CompetitionModel& model, std::size_t r) {
  FixedPointReport report;
  report.r = r;
  report.point = fixed_points(model).at(r);
  report.eigenvalues = analytic_eigenvalues(model, r);
  report.classification = classify(model, r);
  if (r > 0) {
    const std::size_t axis = r - 1;
    report.derivative_term = model.strategies.b[axis] * report.point[axis] *
                             suppression_gradient(model, report.point)[axis];
  }
  return report;
}

}  // namespace turnover
