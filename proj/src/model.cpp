#include "turnover/model.hpp"

#include <cmath>
#include <string>

namespace turnover {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DeathRateOutOfRange: return "DeathRateOutOfRange";
    case ErrorKind::BirthNotExceedDeath: return "BirthNotExceedDeath";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonpositiveKernelParam: return "NonpositiveKernelParam";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::TiedTurnover: return "TiedTurnover";
    case ErrorKind::NonpositiveBeta: return "NonpositiveBeta";
    case ErrorKind::NoTheta: return "NoTheta";
    case ErrorKind::KernelNotInvertible: return "KernelNotInvertible";
    case ErrorKind::KinkProximity: return "KinkProximity";
    case ErrorKind::NonpositiveDenominator: return "NonpositiveDenominator";
    case ErrorKind::NonpositiveComponent: return "NonpositiveComponent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Logistic: return "logistic";
    case KernelFamily::BevertonHolt: return "beverton_holt";
    case KernelFamily::Ricker: return "ricker";
    case KernelFamily::NestSite: return "nest_site";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "logistic") return KernelFamily::Logistic;
  if (name == "beverton_holt") return KernelFamily::BevertonHolt;
  if (name == "ricker") return KernelFamily::Ricker;
  if (name == "nest_site") return KernelFamily::NestSite;
  throw Error(ErrorKind::InvalidArgument, "unknown kernel type '" + std::string(name) + "'");
}

CompetitionModel validate_model(CompetitionModel raw, RateMode mode) {
  const auto k = raw.k;
  if (k == 0) throw Error(ErrorKind::DimensionMismatch, "strategy count must be positive");
  if (raw.strategies.b.size() != k || raw.strategies.d.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "b and d must both have length k");
  }
  if (!raw.kernel.weights.empty() && raw.kernel.weights.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "weights must have length k");
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double b = raw.strategies.b[i];
    const double d = raw.strategies.d[i];
    const auto idx = std::to_string(i + 1);
    if (!std::isfinite(b) || !std::isfinite(d)) {
      throw Error(ErrorKind::InvalidArgument, "non-finite rate for strategy " + idx);
    }
    if (!(d > 0.0) || (mode == RateMode::Discrete && d > 1.0)) {
      throw Error(ErrorKind::DeathRateOutOfRange, "d_" + idx + " = " + std::to_string(d));
    }
    if (!(d < b)) {
      throw Error(ErrorKind::BirthNotExceedDeath, "strategy " + idx + " has b <= d");
    }
  }
  auto& kernel = raw.kernel;
  switch (kernel.family) {
    case KernelFamily::Logistic:
    case KernelFamily::NestSite:
      if (!(kernel.K > 0.0) || !std::isfinite(kernel.K)) {
        throw Error(ErrorKind::NonpositiveKernelParam, "K must be positive");
      }
      break;
    case KernelFamily::BevertonHolt:
    case KernelFamily::Ricker:
      if (!(kernel.c > 0.0) || !std::isfinite(kernel.c)) {
        throw Error(ErrorKind::NonpositiveKernelParam, "c must be positive");
      }
      break;
  }
  for (double w : kernel.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::NonpositiveKernelParam, "weights must be positive");
    }
  }
  if (kernel.family == KernelFamily::NestSite) {
    kernel.births = raw.strategies.b;
  } else {
    kernel.births.clear();
  }
  return raw;
}

double pressure(const SuppressionKernel& kernel, const StateVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += kernel.weight(i) * x[i];
  return s;
}

double profile(const SuppressionKernel& kernel, double s) {
  switch (kernel.family) {
    case KernelFamily::Logistic: {
      const double raw = 1.0 - s / kernel.K;
      return raw > 0.0 ? raw : 0.0;
    }
    case KernelFamily::BevertonHolt: return kernel.c / (kernel.c + s);
    case KernelFamily::Ricker: return std::exp(-kernel.c * s);
    case KernelFamily::NestSite: break;
  }
  throw Error(ErrorKind::KernelNotInvertible, "nest_site has no scalar profile");
}

double profile_derivative(const SuppressionKernel& kernel, double s) {
  switch (kernel.family) {
    case KernelFamily::Logistic: return s < kernel.K ? -1.0 / kernel.K : 0.0;
    case KernelFamily::BevertonHolt: {
      const double den = kernel.c + s;
      return -kernel.c / (den * den);
    }
    case KernelFamily::Ricker: return -kernel.c * std::exp(-kernel.c * s);
    case KernelFamily::NestSite: break;
  }
  throw Error(ErrorKind::KernelNotInvertible, "nest_site has no scalar profile");
}

double profile_inverse(const SuppressionKernel& kernel, double m) {
  switch (kernel.family) {
    case KernelFamily::Logistic: return kernel.K * (1.0 - m);
    case KernelFamily::BevertonHolt: return kernel.c * (1.0 / m - 1.0);
    case KernelFamily::Ricker: return -std::log(m) / kernel.c;
    case KernelFamily::NestSite: break;
  }
  throw Error(ErrorKind::KernelNotInvertible, "nest_site has no scalar profile");
}

namespace {

struct NestSums {
  double weighted = 0.0;  // sum (1 + b_i) x_i
  double total = 0.0;     // sum x_i
  double births = 0.0;    // sum b_i x_i
};

NestSums nest_sums(const SuppressionKernel& kernel, const StateVector& x) {
  NestSums s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s.weighted += (1.0 + kernel.births[i]) * x[i];
    s.total += x[i];
    s.births += kernel.births[i] * x[i];
  }
  return s;
}

}  // namespace

double suppression(const CompetitionModel& model, const StateVector& x) {
  const auto& kernel = model.kernel;
  if (kernel.has_profile()) return profile(kernel, pressure(kernel, x));

  const auto s = nest_sums(kernel, x);
  if (s.weighted <= kernel.K) return 1.0;
  const double raw = (kernel.K - s.total) / s.births;
  return raw > 0.0 ? raw : 0.0;
}

std::vector<double> suppression_gradient(const CompetitionModel& model, const StateVector& x) {
  const auto& kernel = model.kernel;
  std::vector<double> grad(x.size(), 0.0);
  if (kernel.has_profile()) {
    const double slope = profile_derivative(kernel, pressure(kernel, x));
    for (std::size_t j = 0; j < x.size(); ++j) grad[j] = slope * kernel.weight(j);
    return grad;
  }
  const auto s = nest_sums(kernel, x);
  if (s.weighted <= kernel.K || s.total >= kernel.K) return grad;
  const double f = (kernel.K - s.total) / s.births;
  for (std::size_t j = 0; j < x.size(); ++j) grad[j] = -(1.0 + f * kernel.births[j]) / s.births;
  return grad;
}

int kernel_branch(const CompetitionModel& model, const StateVector& x) {
  const auto& kernel = model.kernel;
  switch (kernel.family) {
    case KernelFamily::Logistic: return pressure(kernel, x) < kernel.K ? 0 : 1;
    case KernelFamily::BevertonHolt:
    case KernelFamily::Ricker: return 0;
    case KernelFamily::NestSite: {
      const auto s = nest_sums(kernel, x);
      if (s.weighted <= kernel.K) return 0;
      return s.total < kernel.K ? 1 : 2;
    }
  }
  return 0;
}

StateVector step(const CompetitionModel& model, const StateVector& x) {
  const double fx = suppression(model, x);
  const auto& b = model.strategies.b;
  const auto& d = model.strategies.d;
  StateVector next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = (1.0 - d[i]) * x[i] + b[i] * x[i] * fx;
  }
  return next;
}

StateVector axis_state(std::size_t k, std::size_t r, double y) {
  StateVector x(k, 0.0);
  x[r] = y;
  return x;
}

double reduced_map(const CompetitionModel& model, std::size_t r, double y) {
  if (r >= model.k) {
    throw Error(ErrorKind::IndexOutOfRange, "strategy index " + std::to_string(r + 1) + " > k");
  }
  const double f = suppression(model, axis_state(model.k, r, y));
  return (1.0 - model.strategies.d[r]) * y + model.strategies.b[r] * y * f;
}

}  // namespace turnover
