#pragma once

// Test-only helpers: model builders and random generators.

#include <cmath>
#include <random>
#include <vector>

#include "turnover/model.hpp"

namespace turnover::testing {

inline CompetitionModel logistic(std::vector<double> b, std::vector<double> d, double K = 1.0) {
  CompetitionModel m;
  m.k = b.size();
  m.strategies = {std::move(b), std::move(d)};
  m.kernel.family = KernelFamily::Logistic;
  m.kernel.K = K;
  return validate_model(m);
}

inline CompetitionModel with_kernel(KernelFamily family, std::vector<double> b,
                                    std::vector<double> d, double scale = 1.0,
                                    RateMode mode = RateMode::Discrete) {
  CompetitionModel m;
  m.k = b.size();
  m.strategies = {std::move(b), std::move(d)};
  m.kernel.family = family;
  m.kernel.K = scale;
  m.kernel.c = scale;
  return validate_model(m, mode);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline KernelFamily family_at(std::size_t i) {
  static constexpr KernelFamily kAll[] = {KernelFamily::Logistic, KernelFamily::BevertonHolt,
                                          KernelFamily::Ricker, KernelFamily::NestSite};
  return kAll[i % 4];
}

/// Valid discrete model with k strategies and pairwise-distinct turnovers.
inline CompetitionModel random_model(std::mt19937_64& rng, KernelFamily family, std::size_t k) {
  std::vector<double> b(k);
  std::vector<double> d(k);
  for (std::size_t i = 0; i < k; ++i) {
    d[i] = uniform(rng, 0.05, 1.0);
    b[i] = d[i] * uniform(rng, 1.1, 8.0);
  }
  CompetitionModel m;
  m.k = k;
  m.strategies = {b, d};
  m.kernel.family = family;
  m.kernel.K = uniform(rng, 0.5, 3.0);
  m.kernel.c = uniform(rng, 0.5, 3.0);
  return validate_model(m);
}

inline StateVector random_state(std::mt19937_64& rng, std::size_t k, double lo, double hi) {
  StateVector x(k);
  for (auto& v : x) v = uniform(rng, lo, hi);
  return x;
}

}  // namespace turnover::testing
