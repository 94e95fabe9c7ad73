#include "qmachine/state_measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmachine/cap_integral.hpp"
#include "qmachine/errors.hpp"

namespace qmachine {

namespace {

constexpr double kWeightSlack = 1e-12;
constexpr double kOrderSlack = 1e-9;
constexpr double kMinArea = 1e-13;
constexpr int kMaxRejections = 10'000'000;

/// Whether cap `inner` lies inside cap `outer`.
bool cap_within(const SectorCap& inner, const SectorCap& outer) {
  return angle_between(inner.center, outer.center) + inner.half_angle <= outer.half_angle;
}

bool caps_disjoint(const SectorCap& a, const SectorCap& b) {
  return angle_between(a.center, b.center) >= a.half_angle + b.half_angle;
}

/// Range of v . axis over a cap.
std::pair<double, double> projection_range(const SectorCap& cap, const UnitVector& axis) {
  const double beta = angle_between(cap.center, axis);
  const double far = beta + cap.half_angle;
  const double near = beta - cap.half_angle;
  return {far >= kPi ? -1.0 : std::cos(far), near <= 0.0 ? 1.0 : std::cos(near)};
}

/// Closed form of (1/2) * integral over [-1, 1] of the clamped kernel,
/// the expectation under the uniform measure since v . u is uniform there.
double uniform_kernel_mean(const ClampedKernel& k) {
  const double lo = std::clamp(k.low, -1.0, 1.0);
  const double hi = std::clamp(k.high, -1.0, 1.0);
  double integral = 1.0 - hi;
  if (k.high > k.low) {
    const double width = k.high - k.low;
    // Integral of (x - low) / width over [lo, hi].
    integral += ((hi - k.low) * (hi - k.low) - (lo - k.low) * (lo - k.low)) / (2.0 * width);
  }
  return 0.5 * integral;
}

ClampedKernel outcome_one_kernel(const EpsilonExperiment& e) {
  return {e.axis(), e.band_low(), e.band_high()};
}

double kernel_mean(const ClampedKernel& k, const MixedState& mu, double tol) {
  switch (mu.kind()) {
    case MixedState::Kind::Uniform:
      return uniform_kernel_mean(k);
    case MixedState::Kind::CapUniform: {
      for (const auto& cap : mu.caps()) {
        const auto [lo, hi] = projection_range(cap, k.axis);
        // cos(acos(c)) drifts by a few ulps, hence the slack.
        constexpr double slack = 1e-12;
        if (lo >= k.high - slack && (k.high > k.low || lo > k.low)) return 1.0;
        if (hi <= k.low + slack && (k.high > k.low || hi < k.low)) return 0.0;
      }
      const CapIntegral area = integrate_over_caps(mu.caps(), std::nullopt, tol);
      const CapIntegral mass = integrate_over_caps(mu.caps(), k, tol * area.value);
      if (!mass.converged && mass.error > tol * area.value) {
        throw NumericError("outcome quadrature did not converge", mass.error / area.value);
      }
      return std::clamp(mass.value / area.value, 0.0, 1.0);
    }
    case MixedState::Kind::Mixture: {
      double total = 0.0;
      for (const auto& [w, part] : mu.components()) total += w * kernel_mean(k, part, tol);
      return total;
    }
  }
  return 0.0;
}

}  // namespace

OutcomeSet to_outcome_set(Outcome o) { return o == Outcome::O1 ? OutcomeSet::O1 : OutcomeSet::O2; }

bool Region::contains(const UnitVector& v) const {
  switch (kind_) {
    case Kind::Empty:
      return false;
    case Kind::Full:
      return true;
    case Kind::Cap:
      return cap_.contains(v);
  }
  return false;
}

MixedState MixedState::uniform() { return MixedState(); }

MixedState MixedState::cap_uniform(const SectorCap& cap) {
  if (!(cap.half_angle > 0.0)) throw DomainError("cap-uniform state needs a cap of positive area");
  MixedState s;
  s.kind_ = Kind::CapUniform;
  s.caps_ = {cap};
  return s;
}

MixedState MixedState::cap_intersection_uniform(std::vector<SectorCap> caps) {
  if (caps.empty()) return uniform();
  if (caps.size() == 1) return cap_uniform(caps.front());
  if (integrate_over_caps(caps, std::nullopt, kMinArea).value <= kMinArea) {
    throw DomainError("cap intersection has no area");
  }
  MixedState s;
  s.kind_ = Kind::CapUniform;
  s.caps_ = std::move(caps);
  return s;
}

MixedState MixedState::mixture(std::vector<std::pair<double, MixedState>> parts) {
  if (parts.empty()) throw DomainError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& [w, _] : parts) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSlack) {
    throw DomainError("mixture weights sum to " + std::to_string(total) + ", not 1");
  }
  MixedState s;
  s.kind_ = Kind::Mixture;
  for (auto& [w, part] : parts) {
    s.weights_.push_back(w);
    s.parts_.push_back(std::move(part));
  }
  return s;
}

std::vector<std::pair<double, MixedState>> MixedState::components() const {
  std::vector<std::pair<double, MixedState>> out;
  for (std::size_t i = 0; i < parts_.size(); ++i) out.emplace_back(weights_[i], parts_[i]);
  return out;
}

UnitVector MixedState::sample(RandomStream& stream) const {
  switch (kind_) {
    case Kind::Uniform:
      return sample_uniform_sphere(stream);
    case Kind::CapUniform: {
      const auto narrow = std::min_element(caps_.begin(), caps_.end(), [](const auto& a, const auto& b) {
        return a.half_angle < b.half_angle;
      });
      for (int i = 0; i < kMaxRejections; ++i) {
        const UnitVector v = sample_uniform_cap(stream, *narrow);
        if (std::all_of(caps_.begin(), caps_.end(), [&](const auto& c) { return c.contains(v); })) {
          return v;
        }
      }
      throw NumericError("rejection sampling of a cap intersection failed", 0.0);
    }
    case Kind::Mixture: {
      const double r = stream.uniform01();
      double acc = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        acc += weights_[i];
        if (r < acc) return parts_[i].sample(stream);
      }
      return parts_.back().sample(stream);
    }
  }
  return sample_uniform_sphere(stream);
}

bool MixedState::operator==(const MixedState& o) const {
  return kind_ == o.kind_ && caps_ == o.caps_ && weights_ == o.weights_ && parts_ == o.parts_;
}

Region eig_set(const EpsilonExperiment& e, OutcomeSet a) {
  const auto [lambda, mu] = sector_angles(e.epsilon(), e.d());
  const Boundary b = e.epsilon() > 0.0 ? Boundary::Closed : Boundary::Open;
  switch (a) {
    case OutcomeSet::O1:
      return Region::cap(SectorCap::make(e.axis(), lambda, b));
    case OutcomeSet::O2:
      return Region::cap(SectorCap::make(-e.axis(), mu, b));
    case OutcomeSet::Both:
      return Region::full();
    case OutcomeSet::Neither:
      return Region::empty();
  }
  return Region::empty();
}

Region pos_set(const EpsilonExperiment& e, OutcomeSet a) {
  const auto [lambda, mu] = sector_angles(e.epsilon(), e.d());
  const Boundary b = e.epsilon() > 0.0 ? Boundary::Open : Boundary::Closed;
  switch (a) {
    case OutcomeSet::O1:
      return Region::cap(SectorCap::make(e.axis(), kPi - mu, b));
    case OutcomeSet::O2:
      return Region::cap(SectorCap::make(-e.axis(), kPi - lambda, b));
    case OutcomeSet::Both:
      return Region::full();
    case OutcomeSet::Neither:
      return Region::empty();
  }
  return Region::empty();
}

MeasureValue measure_of(const MixedState& mu, const Region& region, double tol) {
  if (region.kind() == Region::Kind::Empty) return {0.0, false};
  if (region.kind() == Region::Kind::Full) return {1.0, false};
  const SectorCap& r = region.sector();
  switch (mu.kind()) {
    case MixedState::Kind::Uniform:
      return {r.area_fraction(), false};
    case MixedState::Kind::CapUniform: {
      const auto& caps = mu.caps();
      if (std::any_of(caps.begin(), caps.end(), [&](const auto& c) { return cap_within(c, r); })) {
        return {1.0, false};
      }
      if (std::any_of(caps.begin(), caps.end(), [&](const auto& c) { return caps_disjoint(c, r); })) {
        return {0.0, false};
      }
      const CapIntegral area = integrate_over_caps(caps, std::nullopt, tol);
      std::vector<SectorCap> with_region = caps;
      with_region.push_back(r);
      const CapIntegral part = integrate_over_caps(with_region, std::nullopt, tol * area.value);
      const double value = part.value / area.value;
      if (value < tol) return {0.0, true};
      return {std::clamp(value, 0.0, 1.0), false};
    }
    case MixedState::Kind::Mixture: {
      MeasureValue total;
      for (const auto& [w, part] : mu.components()) {
        const MeasureValue m = measure_of(part, region, tol);
        total.value += w * m.value;
        total.below_resolution = total.below_resolution || m.below_resolution;
      }
      return total;
    }
  }
  return {};
}

double outcome_probability_mixed(const EpsilonExperiment& e, OutcomeSet a, const MixedState& mu,
                                 double tol) {
  switch (a) {
    case OutcomeSet::Neither:
      return 0.0;
    case OutcomeSet::Both:
      return 1.0;
    case OutcomeSet::O1:
      return kernel_mean(outcome_one_kernel(e), mu, tol);
    case OutcomeSet::O2:
      return 1.0 - kernel_mean(outcome_one_kernel(e), mu, tol);
  }
  return 0.0;
}

Sandwich sandwich_check(const EpsilonExperiment& e, OutcomeSet a, const MixedState& mu) {
  const double lower = measure_of(mu, eig_set(e, a)).value;
  const double mid = outcome_probability_mixed(e, a, mu);
  const double upper = measure_of(mu, pos_set(e, a)).value;
  return {lower, mid, upper, lower <= mid + kOrderSlack && mid <= upper + kOrderSlack};
}

bool is_classical(const EpsilonExperiment& e, const MixedState& mu) {
  for (OutcomeSet a : {OutcomeSet::O1, OutcomeSet::O2}) {
    const double eig = measure_of(mu, eig_set(e, a)).value;
    const double pos = measure_of(mu, pos_set(e, a)).value;
    if (std::abs(eig - pos) > kOrderSlack) return false;
  }
  return true;
}

MixedState condition(const MixedState& mu, const EpsilonExperiment& f, OutcomeSet a) {
  const Region eig = eig_set(f, a);
  if (eig.kind() == Region::Kind::Full) return mu;
  const MeasureValue m = measure_of(mu, eig);
  if (eig.kind() == Region::Kind::Empty || m.value <= 0.0) {
    throw ConditioningError("eigenstate set has zero measure; this certainty cannot be prepared");
  }
  const SectorCap& cap = eig.sector();
  switch (mu.kind()) {
    case MixedState::Kind::Uniform:
      return MixedState::cap_uniform(cap);
    case MixedState::Kind::CapUniform: {
      if (m.value == 1.0) return mu;
      std::vector<SectorCap> caps = mu.caps();
      caps.push_back(cap);
      return MixedState::cap_intersection_uniform(std::move(caps));
    }
    case MixedState::Kind::Mixture: {
      std::vector<std::pair<double, MixedState>> parts;
      bool unchanged = true;
      for (const auto& [w, part] : mu.components()) {
        const double mi = measure_of(part, eig).value;
        if (mi != 1.0) unchanged = false;
        if (w * mi > 0.0) parts.emplace_back(w * mi / m.value, condition(part, f, a));
      }
      if (unchanged) return mu;
      if (parts.size() == 1) return parts.front().second;
      double total = 0.0;
      for (const auto& p : parts) total += p.first;
      for (auto& p : parts) p.first /= total;
      return MixedState::mixture(std::move(parts));
    }
  }
  return mu;
}

}  // namespace qmachine
