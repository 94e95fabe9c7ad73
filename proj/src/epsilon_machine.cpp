#include "qmachine/epsilon_machine.hpp"

#include <algorithm>
#include <cmath>

#include "qmachine/errors.hpp"

namespace qmachine {

EpsilonExperiment EpsilonExperiment::make(const UnitVector& axis, double epsilon, double d) {
  sector_angles(epsilon, d);  // range check
  return EpsilonExperiment(axis, epsilon, d);
}

double outcome_one_probability(double epsilon, double d, double x) {
  if (epsilon == 0.0) {
    if (x > d) return 1.0;
    if (x < d) return 0.0;
    return 0.5;
  }
  if (x <= d - epsilon) return 0.0;
  if (x >= d + epsilon) return 1.0;
  return std::clamp((x - d + epsilon) / (2.0 * epsilon), 0.0, 1.0);
}

OutcomeDistribution outcome_probabilities(const EpsilonExperiment& e, const SphereState& state) {
  const double p1 = outcome_one_probability(e.epsilon(), e.d(), e.axis().dot(state));
  return {p1, 1.0 - p1};
}

TrialResult run_trial(const EpsilonExperiment& e, const SphereState& state, RandomStream& stream) {
  const double x = e.axis().dot(state);
  double break_point = e.d();
  bool first = false;
  if (e.epsilon() > 0.0) {
    break_point = stream.uniform(e.band_low(), e.band_high());
    first = break_point < x;
  } else if (x != e.d()) {
    first = x > e.d();
  } else {
    first = stream.coin();
  }
  if (first) return {Outcome::O1, e.axis(), break_point};
  return {Outcome::O2, -e.axis(), break_point};
}

Estimate estimate_probability_mc(const EpsilonExperiment& e, const SphereState& state,
                                 std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw UsageError("trial count must be positive");
  RandomStream stream(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (run_trial(e, state, stream).outcome == Outcome::O1) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace qmachine
