#pragma once

// Continuous-time counterpart x_i' = -d_i x_i + b_i x_i f(x), integrated with
// fixed-step classical RK4. Along exact solutions the log-ratio
// R(t) = b_i ln x_1 - b_1 ln x_i grows at the constant rate
// b_1 b_i (1/L_i - 1/L_1), which gives a per-run error meter.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "turnover/exclusion.hpp"
#include "turnover/model.hpp"

namespace turnover {

struct ContinuousTrajectory {
  CompetitionModel model;
  std::vector<double> times;
  std::vector<StateVector> states;
  double dt = 0.0;
};

/// Right-hand side of the ODE.
StateVector vector_field(const CompetitionModel& model, const StateVector& x);

/// Model rates are read as continuous rates (validate with RateMode::Continuous).
ContinuousTrajectory integrate(const CompetitionModel& model, const StateVector& x0,
                               double t_max, double dt);

/// Constant slope of b_i ln x_1 - b_1 ln x_i (strategy indices zero-based).
double log_ratio_slope(const std::vector<double>& b, const std::vector<double>& d,
                       std::size_t dominant, std::size_t i);

/// max over steps of |Delta R / Delta t - slope|, R = b_i ln x_1 - b_1 ln x_i.
/// `dominant` and `i` are zero-based. Throws NonpositiveComponent.
double monotone_ratio_check(const ContinuousTrajectory& traj, const std::vector<double>& b,
                            const std::vector<double>& d, std::size_t i,
                            std::size_t dominant = 0);

struct SideVerdict {
  std::vector<bool> extinct;
  bool converged = false;  // |x'| (continuous) or |T(x) - x| (discrete) below tolerance at the end
  StateVector final_state;
};

struct ConsistencyReport {
  EulerParams euler;
  SideVerdict continuous;
  SideVerdict discrete;
  std::vector<PairConsistency> condition;
  bool extinction_agree = false;
  bool convergence_agree = false;
  bool consistent = false;  // both agreements hold
};

struct CompareOptions {
  StateVector x0;
  double dt = 0.01;                 // RK4 step of the continuous side
  double extinction_tol = 1e-8;
  double convergence_tol = 1e-6;
};

/// Runs the ODE to t_max and the Euler map with step h for ceil(t_max / h)
/// steps from the same x0. b, d are continuous rates. Requires h <= h_max.
ConsistencyReport compare_discrete_continuous(const std::vector<double>& b,
                                              const std::vector<double>& d,
                                              const SuppressionKernel& kernel, double h,
                                              double t_max, const CompareOptions& options);

/// Header `time,x1,...,xk`, 17 significant digits.
void write_continuous_csv(std::ostream& out, const ContinuousTrajectory& traj);

}  // namespace turnover
