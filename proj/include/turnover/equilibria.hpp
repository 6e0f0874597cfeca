#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "turnover/model.hpp"

namespace turnover {

/// Small dense row-major matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

using VectorMap = std::function<StateVector(const StateVector&)>;

/// Central differences, column j from map(x + h e_j) - map(x - h e_j).
Matrix finite_difference_jacobian(const VectorMap& map, const StateVector& x, double h);

/// Central-difference Jacobian of step. Throws KinkProximity when the
/// stencil straddles a piecewise boundary of the kernel.
Matrix numeric_jacobian(const CompetitionModel& model, const StateVector& x, double h = 1e-6);

/// Jacobian of step from the analytic gradient of f:
///   dT_i/dx_j = delta_ij (1 - d_i + b_i f(x)) + b_i x_i df/dx_j
Matrix analytic_jacobian(const CompetitionModel& model, const StateVector& x);

/// x*_0 = 0 followed by the axis fixed points x*_r, r = 1..k, which solve
/// f(0,..,x,..,0) = d_r / b_r. Throws TiedTurnover.
std::vector<StateVector> fixed_points(const CompetitionModel& model);

/// Axis coordinate of x*_r (r one-based) by bisection on f = d_r/b_r.
double axis_fixed_point_bisection(const CompetitionModel& model, std::size_t r);

/// Eigenvalues of the (diagonal) Jacobian at x*_r; r = 0 is the origin.
std::vector<double> analytic_eigenvalues(const CompetitionModel& model, std::size_t r);

enum class Stability { Repulsive, LocallyStable, SemiStable, Unstable };

std::string_view to_string(Stability s);

struct Classification {
  Stability stability = Stability::Unstable;
  bool marginal = false;  // some |lambda| == 1; linearization is inconclusive
};

Classification classify(const CompetitionModel& model, std::size_t r);

struct FixedPointReport {
  std::size_t r = 0;
  StateVector point;
  std::vector<double> eigenvalues;
  Classification classification;
  double derivative_term = 0.0;  // b_r x_r df/dx_r at the point, 0 for the origin
};

FixedPointReport analyze_fixed_point(const CompetitionModel& model, std::size_t r);

}  // namespace turnover
