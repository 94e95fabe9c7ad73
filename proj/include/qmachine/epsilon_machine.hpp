#pragma once

#include <cstdint>

#include "qmachine/random.hpp"
#include "qmachine/sphere.hpp"

namespace qmachine {

enum class Outcome { O1, O2 };

/// The experiment e(u, epsilon, d): an elastic from -u to u that breaks
/// uniformly on the band [(d - epsilon) u, (d + epsilon) u] and nowhere else.
class EpsilonExperiment {
 public:
  /// Throws DomainError unless epsilon is in [0, 1] and d in
  /// [-1 + epsilon, 1 - epsilon].
  static EpsilonExperiment make(const UnitVector& axis, double epsilon, double d);

  const UnitVector& axis() const { return axis_; }
  double epsilon() const { return epsilon_; }
  double d() const { return d_; }
  double band_low() const { return d_ - epsilon_; }
  double band_high() const { return d_ + epsilon_; }

  bool operator==(const EpsilonExperiment&) const = default;

 private:
  EpsilonExperiment(const UnitVector& axis, double epsilon, double d)
      : axis_(axis), epsilon_(epsilon), d_(d) {}

  UnitVector axis_;
  double epsilon_;
  double d_;
};

struct OutcomeDistribution {
  double p1;
  double p2;  // always 1 - p1
};

struct TrialResult {
  Outcome outcome;
  SphereState post_state;
  /// Projection on the axis where the elastic broke.
  double break_point;
};

/// Probability of outcome 1 as a function of the projection x = v . u.
/// Clamped-linear across the band; a step at d when epsilon is zero,
/// with the value 1/2 exactly at x = d.
double outcome_one_probability(double epsilon, double d, double x);

OutcomeDistribution outcome_probabilities(const EpsilonExperiment& e, const SphereState& state);

/// One run of the machine. The break point is uniform on the band; the
/// particle lands at u when the break lies strictly below its projection.
TrialResult run_trial(const EpsilonExperiment& e, const SphereState& state, RandomStream& stream);

struct Estimate {
  double estimate;
  double std_error;
};

/// Outcome-1 frequency over n trials from a stream seeded with `seed`.
/// Throws UsageError when n is zero.
Estimate estimate_probability_mc(const EpsilonExperiment& e, const SphereState& state,
                                 std::uint64_t n, std::uint64_t seed);

}  // namespace qmachine
