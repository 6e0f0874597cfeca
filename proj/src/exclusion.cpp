#include "turnover/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <string>

#include "turnover/periodic.hpp"

namespace turnover {

std::vector<double> turnover(const StrategyParams& params) {
  std::vector<double> L(params.size());
  for (std::size_t i = 0; i < L.size(); ++i) L[i] = params.b[i] / params.d[i];
  for (std::size_t i = 0; i < L.size(); ++i) {
    for (std::size_t j = i + 1; j < L.size(); ++j) {
      if (L[i] == L[j]) {
        throw Error(ErrorKind::TiedTurnover, "strategies " + std::to_string(i + 1) + " and " +
                                                 std::to_string(j + 1) + " share L = " +
                                                 std::to_string(L[i]));
      }
    }
  }
  return L;
}

std::vector<std::size_t> turnover_order(const StrategyParams& params) {
  const auto L = turnover(params);
  std::vector<std::size_t> order(L.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return L[a] > L[b]; });
  return order;
}

PairCoefficients pair_coefficients(double b1, double d1, double bi, double di) {
  PairCoefficients p;
  p.alpha = b1 / bi;
  p.beta = p.alpha * di - d1;
  p.gamma = p.beta + 1.0 - p.alpha;
  if (!(p.beta > 0.0)) {
    throw Error(ErrorKind::NonpositiveBeta, "strategy 1 must have the strictly larger turnover");
  }
  return p;
}

ExclusionReport exclusion_predicate(const CompetitionModel& model) {
  const auto& s = model.strategies;
  ExclusionReport report;
  report.L = turnover(s);
  const auto order = turnover_order(s);
  report.dominant = order.front();
  const std::size_t top = report.dominant;
  bool any_open = false;
  for (std::size_t n = 1; n < order.size(); ++n) {
    const std::size_t i = order[n];
    PairVerdict v;
    v.i = i;
    v.coeff = pair_coefficients(s.b[top], s.d[top], s.b[i], s.d[i]);
    v.excluded = excluded(v.coeff);
    any_open = any_open || !v.excluded;
    report.pairs.push_back(v);
  }
  if (any_open) {
    report.note =
        "alpha > 1 + beta: period-two positive sequences satisfy the log-derivative coupling, "
        "but this does not show the concrete model has a coexistence orbit; "
        "run the periodic analysis to decide";
  } else {
    report.note = "alpha <= 1 + beta for every pair: all non-dominant strategies go extinct";
  }
  return report;
}

SequencePair counterexample_sequences(const PairCoefficients& coeff, double c1, double c2,
                                      std::size_t n) {
  if (excluded(coeff)) {
    throw Error(ErrorKind::NoTheta, "alpha <= 1 + beta admits no period-two sequences");
  }
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "c1 and c2 must be positive");
  }
  const auto root = solve_theta(coeff.alpha, coeff.gamma);
  const double u_ratio = coeff.alpha * root.theta + coeff.gamma;
  SequencePair seq;
  seq.theta = root.theta;
  seq.u.resize(n);
  seq.v.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const bool even = (j % 2) == 1;  // 1-based position j+1 is even
    seq.u[j] = even ? c1 * u_ratio : c1;
    seq.v[j] = even ? c2 * root.theta : c2;
  }
  return seq;
}

double recurrence_residual(const std::vector<double>& u, const std::vector<double>& v,
                           double alpha, double beta) {
  if (u.size() != v.size() || u.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "sequences must have equal length >= 2");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < u.size(); ++n) {
    const double du = (u[n + 1] - u[n]) / u[n];
    const double dv = (v[n + 1] - v[n]) / v[n];
    worst = std::max(worst, std::abs(du - alpha * dv - beta));
  }
  return worst;
}

double lemma_product(double alpha, double gamma, const std::vector<double>& x) {
  double g = 1.0;
  for (double xj : x) g *= alpha * xj + gamma;
  return g;
}

double lemma_bound(double alpha, double gamma, int n, double m) {
  return std::pow(alpha * std::pow(m, 1.0 / n) + gamma, n);
}

bool lemma_min_check(double alpha, double gamma, int n, double m, std::size_t samples,
                     std::uint64_t seed) {
  if (!(alpha > 0.0) || !(gamma >= 0.0) || !(m > 0.0) || n < 1 || n > 6) {
    throw Error(ErrorKind::InvalidArgument, "lemma check needs alpha > 0, gamma >= 0, m > 0, n in 1..6");
  }
  const double bound = lemma_bound(alpha, gamma, n, m);
  const double slack = 1e-12 * std::max(1.0, bound);
  const double log_m = std::log(m);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_factor(-5.0, 5.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < samples; ++s) {
    double log_sum = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      const double l = log_m / n + log_factor(rng);
      x[j] = std::exp(l);
      log_sum += l;
    }
    x[n - 1] = std::exp(log_m - log_sum);
    if (lemma_product(alpha, gamma, x) < bound - slack) return false;
  }

  // Exchange directions x_j -> x* e^s, x_n -> x* e^{-s} keep the product fixed.
  const double centre = std::exp(log_m / n);
  const double at_centre = lemma_product(alpha, gamma, std::vector<double>(n, centre));
  if (std::abs(at_centre - bound) > slack) return false;
  constexpr int kGrid = 1000;
  for (int j = 0; j + 1 < n; ++j) {
    for (int g = 0; g <= kGrid; ++g) {
      const double s = -2.0 + 4.0 * g / kGrid;
      std::vector<double> y(n, centre);
      y[j] = centre * std::exp(s);
      y[n - 1] = centre * std::exp(-s);
      if (lemma_product(alpha, gamma, y) < at_centre - slack) return false;
    }
  }
  return true;
}

EulerParams euler_discretize(const std::vector<double>& b, const std::vector<double>& d,
                             double h) {
  if (b.size() != d.size() || b.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "b and d must have equal nonzero length");
  }
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  EulerParams e;
  e.h = h;
  e.h_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    e.b.push_back(b[i] * h);
    e.d.push_back(d[i] * h);
    e.h_max = std::min(e.h_max, 1.0 / d[i]);
  }
  e.valid = h <= e.h_max;
  return e;
}

std::vector<PairConsistency> consistency_condition(const std::vector<double>& b,
                                                   const std::vector<double>& d, double h) {
  const auto order = turnover_order(StrategyParams{b, d});
  const std::size_t top = order.front();
  std::vector<PairConsistency> out;
  for (std::size_t n = 1; n < order.size(); ++n) {
    const std::size_t i = order[n];
    const double gap = b[top] * d[i] - b[i] * d[top];
    if (!(gap > 0.0)) {
      throw Error(ErrorKind::NonpositiveDenominator,
                  "b_1 d_i - b_i d_1 must be positive for strategy " + std::to_string(i + 1));
    }
    PairConsistency c;
    c.i = i;
    c.lhs = b[top] - b[i];
    c.rhs = gap * h;
    c.holds = c.lhs <= c.rhs;
    out.push_back(c);
  }
  return out;
}

}  // namespace turnover
