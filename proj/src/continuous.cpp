#include "turnover/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "turnover/simulate.hpp"

namespace turnover {

StateVector vector_field(const CompetitionModel& model, const StateVector& x) {
  const double f = suppression(model, x);
  StateVector dx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    dx[i] = x[i] * (-model.strategies.d[i] + model.strategies.b[i] * f);
  }
  return dx;
}

namespace {

StateVector axpy(const StateVector& x, double a, const StateVector& y) {
  StateVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

StateVector rk4_step(const CompetitionModel& model, const StateVector& x, double dt) {
  const auto k1 = vector_field(model, x);
  const auto k2 = vector_field(model, axpy(x, 0.5 * dt, k1));
  const auto k3 = vector_field(model, axpy(x, 0.5 * dt, k2));
  const auto k4 = vector_field(model, axpy(x, dt, k3));
  StateVector next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

double sup_norm(const StateVector& x) {
  double n = 0.0;
  for (double v : x) n = std::max(n, std::abs(v));
  return n;
}

}  // namespace

ContinuousTrajectory integrate(const CompetitionModel& model, const StateVector& x0,
                               double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= dt)) {
    throw Error(ErrorKind::InvalidArgument, "need dt > 0 and t_max >= dt");
  }
  if (x0.size() != model.k) throw Error(ErrorKind::DimensionMismatch, "x0 must have length k");
  const auto n = static_cast<std::size_t>(std::llround(t_max / dt));
  ContinuousTrajectory traj{model, {}, {}, dt};
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  for (std::size_t s = 1; s <= n; ++s) {
    auto next = rk4_step(model, traj.states.back(), dt);
    for (double v : next) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFiniteState, "RK4 produced a non-finite state");
      }
    }
    traj.times.push_back(static_cast<double>(s) * dt);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

double log_ratio_slope(const std::vector<double>& b, const std::vector<double>& d,
                       std::size_t dominant, std::size_t i) {
  return b[dominant] * b[i] * (d[i] / b[i] - d[dominant] / b[dominant]);
}

double monotone_ratio_check(const ContinuousTrajectory& traj, const std::vector<double>& b,
                            const std::vector<double>& d, std::size_t i, std::size_t dominant) {
  if (i >= b.size() || dominant >= b.size() || i == dominant) {
    throw Error(ErrorKind::IndexOutOfRange, "invalid strategy pair");
  }
  const double slope = log_ratio_slope(b, d, dominant, i);
  auto ratio = [&](const StateVector& x) {
    if (!(x[dominant] > 0.0) || !(x[i] > 0.0)) {
      throw Error(ErrorKind::NonpositiveComponent, "log-ratio needs positive components");
    }
    return b[i] * std::log(x[dominant]) - b[dominant] * std::log(x[i]);
  };
  double worst = 0.0;
  double prev = ratio(traj.states.front());
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    const double cur = ratio(traj.states[s]);
    const double dt = traj.times[s] - traj.times[s - 1];
    worst = std::max(worst, std::abs((cur - prev) / dt - slope));
    prev = cur;
  }
  return worst;
}

ConsistencyReport compare_discrete_continuous(const std::vector<double>& b,
                                              const std::vector<double>& d,
                                              const SuppressionKernel& kernel, double h,
                                              double t_max, const CompareOptions& options) {
  ConsistencyReport report;
  report.euler = euler_discretize(b, d, h);
  if (!report.euler.valid) {
    throw Error(ErrorKind::InvalidArgument, "h exceeds h_max = 1 / max d_i");
  }
  report.condition = consistency_condition(b, d, h);

  const auto k = b.size();
  const auto ode_model = validate_model(CompetitionModel{k, {b, d}, kernel}, RateMode::Continuous);
  const auto ode = integrate(ode_model, options.x0, t_max, options.dt);
  report.continuous.final_state = ode.states.back();
  report.continuous.converged =
      sup_norm(vector_field(ode_model, ode.states.back())) < options.convergence_tol;
  {
    // Same extinction rule as the discrete side: small and not increasing.
    const auto& last = ode.states.back();
    const auto& mid = ode.states[(ode.states.size() - 1) / 2];
    for (std::size_t i = 0; i < k; ++i) {
      report.continuous.extinct.push_back(last[i] < options.extinction_tol && last[i] <= mid[i]);
    }
  }

  const auto map_model =
      validate_model(CompetitionModel{k, {report.euler.b, report.euler.d}, kernel});
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / h - 1e-9));
  const auto traj = trajectory(map_model, options.x0, steps);
  const auto& last = traj.states.back();
  report.discrete.final_state = last;
  report.discrete.extinct = extinction_diagnostics(traj, options.extinction_tol);
  {
    const auto image = step(map_model, last);
    double gap = 0.0;
    for (std::size_t i = 0; i < k; ++i) gap = std::max(gap, std::abs(image[i] - last[i]));
    report.discrete.converged = gap < options.convergence_tol;
  }

  report.extinction_agree = report.continuous.extinct == report.discrete.extinct;
  report.convergence_agree = report.continuous.converged == report.discrete.converged;
  report.consistent = report.extinction_agree && report.convergence_agree;
  return report;
}

void write_continuous_csv(std::ostream& out, const ContinuousTrajectory& traj) {
  out << "time";
  for (std::size_t i = 0; i < traj.model.k; ++i) out << ",x" << (i + 1);
  out << '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    out << fmt::format("{:.17g}", traj.times[s]);
    for (double v : traj.states[s]) out << ',' << fmt::format("{:.17g}", v);
    out << '\n';
  }
}

}  // namespace turnover
