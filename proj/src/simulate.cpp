#include "turnover/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace turnover {

namespace {

bool all_finite(const StateVector& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double min_weight(const SuppressionKernel& kernel, std::size_t k) {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) w = std::min(w, kernel.weight(i));
  return w;
}

}  // namespace

double total_size(const StateVector& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

Trajectory trajectory(const CompetitionModel& model, const StateVector& x0, std::size_t n) {
  if (x0.size() != model.k) {
    throw Error(ErrorKind::DimensionMismatch, "initial state must have length k");
  }
  for (double v : x0) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, "initial state must be finite and nonnegative");
    }
  }
  Trajectory traj{model, {}};
  traj.states.reserve(n + 1);
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < n; ++t) {
    auto next = step(model, traj.states.back());
    if (!all_finite(next)) {
      throw Error(ErrorKind::NonFiniteState, "non-finite state at step " + std::to_string(t + 1));
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

InvariantRegion invariant_bound(const CompetitionModel& model) {
  const auto& b = model.strategies.b;
  const auto& d = model.strategies.d;
  InvariantRegion region;
  region.mu = std::numeric_limits<double>::infinity();
  double amplification = 0.0;
  for (std::size_t i = 0; i < model.k; ++i) {
    region.mu = std::min(region.mu, d[i] / b[i]);
    amplification = std::max(amplification, 1.0 - d[i] + b[i]);
  }
  const auto& kernel = model.kernel;
  switch (kernel.family) {
    case KernelFamily::Logistic: region.M = kernel.K * (1.0 - region.mu); break;
    case KernelFamily::BevertonHolt: region.M = kernel.c * (1.0 / region.mu - 1.0); break;
    case KernelFamily::Ricker: region.M = std::log(1.0 / region.mu) / kernel.c; break;
    case KernelFamily::NestSite: region.M = kernel.K; break;
  }
  // M bounds the weighted pressure; convert to a bound on the plain total.
  const double total_threshold =
      kernel.has_profile() ? region.M / min_weight(kernel, model.k) : region.M;
  region.M_bar = total_threshold * amplification;
  return region;
}

double persistence_probe(const CompetitionModel& model, const StateVector& x0,
                         std::size_t horizon, std::size_t window) {
  if (window == 0 || window > horizon) {
    throw Error(ErrorKind::InvalidArgument, "window must be in [1, horizon]");
  }
  const auto traj = trajectory(model, x0, horizon);
  double floor = std::numeric_limits<double>::infinity();
  for (std::size_t t = horizon + 1 - window; t <= horizon; ++t) {
    floor = std::min(floor, total_size(traj.states[t]));
  }
  return floor;
}

double pseudo_orbit_residual(const Trajectory& traj, std::size_t r, std::size_t transient) {
  if (transient >= traj.states.size()) {
    throw Error(ErrorKind::InvalidArgument, "transient exceeds trajectory length");
  }
  if (r >= traj.model.k) throw Error(ErrorKind::IndexOutOfRange, "strategy index out of range");
  double sup = 0.0;
  for (std::size_t t = transient; t + 1 < traj.states.size(); ++t) {
    const double predicted = reduced_map(traj.model, r, traj.states[t][r]);
    sup = std::max(sup, std::abs(predicted - traj.states[t + 1][r]));
  }
  return sup;
}

std::vector<bool> extinction_diagnostics(const Trajectory& traj, double tol) {
  const std::size_t k = traj.model.k;
  std::vector<bool> extinct(k, false);
  if (traj.states.empty()) return extinct;
  const auto& last = traj.states.back();
  const auto& mid = traj.states[traj.steps() / 2];
  for (std::size_t i = 0; i < k; ++i) {
    extinct[i] = last[i] < tol && last[i] <= mid[i];
  }
  return extinct;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << 't';
  for (std::size_t i = 0; i < traj.model.k; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (double v : traj.states[t]) out << ',' << fmt::format("{:.17g}", v);
    out << '\n';
  }
}

}  // namespace turnover
