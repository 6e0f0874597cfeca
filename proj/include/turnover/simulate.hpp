#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "turnover/model.hpp"

namespace turnover {

struct Trajectory {
  CompetitionModel model;
  std::vector<StateVector> states;  // states[t], t = 0..n

  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

/// Absorbing region of the map.
struct InvariantRegion {
  double mu = 0.0;     // min_i d_i / b_i
  double M = 0.0;      // f(x) <= mu once <w, x> >= M
  double M_bar = 0.0;  // {x >= 0 : sum x <= M_bar} is mapped into itself
};

/// Iterates step n times. Throws NonFiniteState on overflow or NaN.
Trajectory trajectory(const CompetitionModel& model, const StateVector& x0, std::size_t n);

InvariantRegion invariant_bound(const CompetitionModel& model);

double total_size(const StateVector& x);

/// Minimum of sum x_i(t) over the last `window` steps of a `horizon`-step run.
double persistence_probe(const CompetitionModel& model, const StateVector& x0,
                         std::size_t horizon, std::size_t window);

/// sup_{t >= transient} |S_r(x_r(t)) - x_r(t+1)|, with r zero-based.
double pseudo_orbit_residual(const Trajectory& traj, std::size_t r, std::size_t transient);

inline constexpr double kDefaultExtinctionTol = 1e-8;

/// extinct[i]: x_i(final) < tol and x_i(final) <= x_i(n/2).
std::vector<bool> extinction_diagnostics(const Trajectory& traj,
                                         double tol = kDefaultExtinctionTol);

/// Header `t,x1,...,xk`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace turnover
