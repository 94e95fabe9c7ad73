#pragma once

#include <vector>

#include "qmachine/epsilon_machine.hpp"
#include "qmachine/random.hpp"
#include "qmachine/sphere.hpp"

namespace qmachine {

enum class OutcomeSet { O1, O2, Both, Neither };

OutcomeSet to_outcome_set(Outcome o);

/// A subset of the sphere built from the eigenstate and possibility sets:
/// empty, the whole sphere, or a single cap.
class Region {
 public:
  enum class Kind { Empty, Full, Cap };

  static Region empty() { return Region(Kind::Empty, {}); }
  static Region full() { return Region(Kind::Full, {}); }
  static Region cap(const SectorCap& c) { return Region(Kind::Cap, c); }

  Kind kind() const { return kind_; }
  /// Only meaningful when kind() == Kind::Cap.
  const SectorCap& sector() const { return cap_; }
  bool contains(const UnitVector& v) const;

  bool operator==(const Region&) const = default;

 private:
  Region(Kind k, SectorCap c) : kind_(k), cap_(c) {}

  Kind kind_;
  SectorCap cap_;
};

/// A probability measure on the sphere: uniform, uniform on a cap (or on an
/// intersection of caps, which is what conditioning a cap-uniform state
/// produces), or a finite mixture of these.
class MixedState {
 public:
  enum class Kind { Uniform, CapUniform, Mixture };

  static MixedState uniform();
  /// Throws DomainError for a zero-radius cap.
  static MixedState cap_uniform(const SectorCap& cap);
  /// Uniform on the intersection of the caps. Throws DomainError when the
  /// intersection has no area.
  static MixedState cap_intersection_uniform(std::vector<SectorCap> caps);
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  static MixedState mixture(std::vector<std::pair<double, MixedState>> parts);

  Kind kind() const { return kind_; }
  const std::vector<SectorCap>& caps() const { return caps_; }
  std::vector<std::pair<double, MixedState>> components() const;

  UnitVector sample(RandomStream& stream) const;

  bool operator==(const MixedState& o) const;

 private:
  Kind kind_ = Kind::Uniform;
  std::vector<SectorCap> caps_;
  std::vector<double> weights_;
  std::vector<MixedState> parts_;
};

Region eig_set(const EpsilonExperiment& e, OutcomeSet a);
Region pos_set(const EpsilonExperiment& e, OutcomeSet a);

struct MeasureValue {
  double value = 0.0;
  /// Set when an intersection area fell below the quadrature resolution and
  /// was reported as zero.
  bool below_resolution = false;
};

inline constexpr double kMeasureTolerance = 1e-9;

MeasureValue measure_of(const MixedState& mu, const Region& region,
                        double tol = kMeasureTolerance);

/// Integral of P(a | p_v) against mu. Throws NumericError when the
/// quadrature misses its tolerance.
double outcome_probability_mixed(const EpsilonExperiment& e, OutcomeSet a, const MixedState& mu,
                                 double tol = kMeasureTolerance);

struct Sandwich {
  double lower;
  double mid;
  double upper;
  bool holds;
};

/// (mu(eig(a)), P(a, mu), mu(pos(a))) and whether they are ordered within 1e-9.
Sandwich sandwich_check(const EpsilonExperiment& e, OutcomeSet a, const MixedState& mu);

/// True when eig and pos sets of both outcomes carry the same mu-measure.
bool is_classical(const EpsilonExperiment& e, const MixedState& mu);

/// Restricts mu to eig(a) of f and renormalizes. Throws ConditioningError
/// when that set has zero mu-measure.
MixedState condition(const MixedState& mu, const EpsilonExperiment& f, OutcomeSet a);

}  // namespace qmachine
