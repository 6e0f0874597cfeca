#pragma once

// Core types of the discrete competition map
//
//   x_i(t+1) = (1 - d_i) x_i(t) + b_i x_i(t) f(x(t))
//
// where f is a shared suppression (juvenile survival) factor in [0, 1].

#include <cstddef>
#include <string_view>
#include <vector>

#include "turnover/error.hpp"

namespace turnover {

using StateVector = std::vector<double>;

struct StrategyParams {
  std::vector<double> b;  // per-capita births per step
  std::vector<double> d;  // per-capita deaths per step

  std::size_t size() const noexcept { return b.size(); }
};

enum class KernelFamily { Logistic, BevertonHolt, Ricker, NestSite };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Suppression function f. The first three families are profiles of the
/// weighted pressure s = <w, x>:
///   Logistic      phi(s) = max(0, 1 - s/K)
///   BevertonHolt  phi(s) = c / (c + s)
///   Ricker        phi(s) = exp(-c s)
/// NestSite is the piecewise free-nest-site form; it ignores weights and
/// needs the birth vector, which validate_model copies in.
struct SuppressionKernel {
  KernelFamily family = KernelFamily::Logistic;
  double K = 1.0;
  double c = 1.0;
  std::vector<double> weights;  // empty means all ones
  std::vector<double> births;   // NestSite only

  bool has_profile() const noexcept { return family != KernelFamily::NestSite; }
  double weight(std::size_t i) const noexcept { return weights.empty() ? 1.0 : weights[i]; }
};

struct CompetitionModel {
  std::size_t k = 0;
  StrategyParams strategies;
  SuppressionKernel kernel;
};

/// Discrete models need 0 < d_i <= 1; continuous-rate models only d_i > 0.
enum class RateMode { Discrete, Continuous };

/// Returns the model with the NestSite birth vector filled in, or throws
/// DeathRateOutOfRange, BirthNotExceedDeath, DimensionMismatch or
/// NonpositiveKernelParam.
CompetitionModel validate_model(CompetitionModel raw, RateMode mode = RateMode::Discrete);

// Kernel evaluation -------------------------------------------------------

double pressure(const SuppressionKernel& kernel, const StateVector& x);

double profile(const SuppressionKernel& kernel, double s);
double profile_derivative(const SuppressionKernel& kernel, double s);
/// Inverse of phi on (0, 1). Throws KernelNotInvertible for NestSite.
double profile_inverse(const SuppressionKernel& kernel, double m);

/// f(x), always in [0, 1].
double suppression(const CompetitionModel& model, const StateVector& x);

/// Analytic gradient of f; one-sided (the active branch) on kinks.
std::vector<double> suppression_gradient(const CompetitionModel& model, const StateVector& x);

/// Identifies the smooth piece of f that x lies on. Equal ids on a
/// finite-difference stencil mean the stencil does not straddle a kink.
int kernel_branch(const CompetitionModel& model, const StateVector& x);

// Maps ----------------------------------------------------------------------

/// T(x), the full k-dimensional map.
StateVector step(const CompetitionModel& model, const StateVector& x);

/// S_r(y) = (1 - d_r) y + b_r y f(0,..,y,..,0), the map restricted to axis r
/// (zero-based strategy index).
double reduced_map(const CompetitionModel& model, std::size_t r, double y);

StateVector axis_state(std::size_t k, std::size_t r, double y);

}  // namespace turnover
