#pragma once

// Turnover ordering and the pairwise exclusion criterion.
//
// Writing D x = (x(t+1) - x(t)) / x(t) for the discrete log-derivative, every
// trajectory of the map obeys, for the dominant strategy 1 and any other i,
//
//   D x_1 = alpha D x_i + beta,   alpha = b_1/b_i,  beta = alpha d_i - d_1.
//
// Sequences coupled this way with bounded positive u force v -> 0 exactly
// when alpha <= 1 + beta; otherwise a period-two pair of positive sequences
// satisfies the same relation.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "turnover/model.hpp"

namespace turnover {

/// L_i = b_i / d_i. Throws TiedTurnover if two coefficients coincide.
std::vector<double> turnover(const StrategyParams& params);

/// Indices ordered by decreasing turnover; throws TiedTurnover on ties.
std::vector<std::size_t> turnover_order(const StrategyParams& params);

struct PairCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;  // beta + 1 - alpha
};

/// Throws NonpositiveBeta unless b1/d1 > bi/di.
PairCoefficients pair_coefficients(double b1, double d1, double bi, double di);

inline bool excluded(const PairCoefficients& p) { return p.alpha <= 1.0 + p.beta; }

struct PairVerdict {
  std::size_t i = 0;  // zero-based index of the dominated strategy
  PairCoefficients coeff;
  bool excluded = false;
};

struct ExclusionReport {
  std::vector<double> L;
  std::size_t dominant = 0;  // zero-based
  std::vector<PairVerdict> pairs;
  std::string note;
};

ExclusionReport exclusion_predicate(const CompetitionModel& model);

struct SequencePair {
  std::vector<double> u;
  std::vector<double> v;
  double theta = 0.0;
};

/// u = c1, c1(alpha theta + gamma), c1, ...;  v = c2, c2 theta, c2, ...
/// Throws NoTheta when alpha <= 1 + beta.
SequencePair counterexample_sequences(const PairCoefficients& coeff, double c1, double c2,
                                      std::size_t n);

/// max_n |(u_{n+1} - u_n)/u_n - alpha (v_{n+1} - v_n)/v_n - beta|
double recurrence_residual(const std::vector<double>& u, const std::vector<double>& v,
                           double alpha, double beta);

/// g_n(x) = prod (alpha x_j + gamma)
double lemma_product(double alpha, double gamma, const std::vector<double>& x);

/// (alpha m^{1/n} + gamma)^n
double lemma_bound(double alpha, double gamma, int n, double m);

/// Empirical check that the bound is the minimum of g_n on {prod x_j = m}:
/// random log-uniform points on the constraint surface never fall below it,
/// and a 1-D grid along every exchange direction through the symmetric point
/// has its minimum at that point.
bool lemma_min_check(double alpha, double gamma, int n, double m, std::size_t samples,
                     std::uint64_t seed = 0);

struct EulerParams {
  std::vector<double> b;  // b_i h
  std::vector<double> d;  // d_i h
  double h = 0.0;
  double h_max = 0.0;  // min 1/d_i
  bool valid = false;  // 0 < h <= h_max
};

EulerParams euler_discretize(const std::vector<double>& b, const std::vector<double>& d,
                             double h);

struct PairConsistency {
  std::size_t i = 0;  // zero-based
  double lhs = 0.0;   // b_1 - b_i
  double rhs = 0.0;   // (b_1 d_i - b_i d_1) h
  bool holds = false;
};

/// Exclusion criterion of the Euler scheme with step h, per dominated pair.
/// Throws NonpositiveDenominator if a pair violates the turnover ordering.
std::vector<PairConsistency> consistency_condition(const std::vector<double>& b,
                                                   const std::vector<double>& d, double h);

}  // namespace turnover
