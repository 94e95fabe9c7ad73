#include "qmachine/cap_integral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmachine/errors.hpp"
#include "qmachine/quadrature.hpp"

namespace qmachine {

double ClampedKernel::operator()(double x) const {
  if (high <= low) {
    if (x > low) return 1.0;
    if (x < low) return 0.0;
    return 0.5;
  }
  if (x <= low) return 0.0;
  if (x >= high) return 1.0;
  return (x - low) / (high - low);
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTiny = 1e-14;

struct Interval {
  double lo, hi;
};

/// Position of a direction relative to the polar frame (p, e1, e2).
struct FramePosition {
  double along;    // direction . p
  double across;   // length of the projection on the (e1, e2) plane
  double azimuth;  // azimuth of that projection
};

FramePosition locate(const UnitVector& c, const UnitVector& p, const UnitVector& e1,
                     const UnitVector& e2) {
  const double a1 = c.dot(e1);
  const double a2 = c.dot(e2);
  const double r = std::hypot(a1, a2);
  return {c.dot(p), r, r > kTiny ? std::atan2(a2, a1) : 0.0};
}

struct CapConstraint {
  FramePosition pos;
  double threshold;  // cos(half_angle)
};

/// Arcs of [0, 2pi) where cos(phi - center) >= t.
std::vector<Interval> arc_where(double center, double t) {
  if (t <= -1.0) return {{0.0, kTwoPi}};
  if (t >= 1.0) return {};
  const double h = std::acos(t);
  double start = std::fmod(center - h, kTwoPi);
  if (start < 0.0) start += kTwoPi;
  const double end = start + 2.0 * h;
  if (end <= kTwoPi) return {{start, end}};
  return {{0.0, end - kTwoPi}, {start, kTwoPi}};
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

/// Antiderivative in the azimuth psi of g(A + B cos psi), anchored at 0.
class KernelAntiderivative {
 public:
  KernelAntiderivative(const ClampedKernel& k, double a, double b) : k_(k), a_(a), b_(b) {
    if (b_ > kTiny) {
      phi_high_ = std::acos(std::clamp((k_.high - a_) / b_, -1.0, 1.0));
      phi_low_ = std::acos(std::clamp((k_.low - a_) / b_, -1.0, 1.0));
    }
    half_turn_ = on_half_turn(kPi);
  }

  double operator()(double psi) const {
    const double m = std::floor((psi + kPi) / kTwoPi);
    const double r = psi - kTwoPi * m;
    const double inner = r >= 0.0 ? on_half_turn(r) : -on_half_turn(-r);
    return 2.0 * m * half_turn_ + inner;
  }

 private:
  // psi in [0, pi], where A + B cos psi decreases from A + B to A - B.
  double on_half_turn(double psi) const {
    if (b_ <= kTiny) return psi * k_(a_);
    if (k_.high <= k_.low) return std::min(psi, phi_high_);
    const double width = k_.high - k_.low;
    auto linear = [&](double s) { return ((a_ - k_.low) * s + b_ * std::sin(s)) / width; };
    const double s = std::clamp(psi, phi_high_, phi_low_);
    return std::min(psi, phi_high_) + linear(s) - linear(phi_high_);
  }

  ClampedKernel k_;
  double a_, b_;
  double phi_high_ = 0.0, phi_low_ = 0.0;
  double half_turn_ = 0.0;
};

/// Polar angles in (lo, hi) where a latitude circle around p is tangent to
/// the plane {v : v . c = t}, c at polar angle beta.
void tangent_angles(double beta, double t, double lo, double hi, std::vector<double>& out) {
  const double a = std::acos(std::clamp(t, -1.0, 1.0));
  for (double theta : {beta + a, beta - a, a - beta, kTwoPi - beta - a}) {
    if (theta > lo && theta < hi) out.push_back(theta);
  }
}

}  // namespace

CapIntegral integrate_over_caps(std::span<const SectorCap> caps,
                                const std::optional<ClampedKernel>& kernel, double tol) {
  if (caps.empty()) throw UsageError("cap integral needs at least one cap");
  const auto primary = std::min_element(caps.begin(), caps.end(), [](const auto& a, const auto& b) {
    return a.half_angle < b.half_angle;
  });
  const double rho = primary->half_angle;
  if (rho <= 0.0) return {};

  const UnitVector& p = primary->center;
  const auto [e1, e2] = p.orthonormal_complement();

  std::vector<CapConstraint> constraints;
  std::vector<double> cuts{0.0, rho};
  for (auto it = caps.begin(); it != caps.end(); ++it) {
    if (it == primary) continue;
    const FramePosition pos = locate(it->center, p, e1, e2);
    const double t = std::cos(it->half_angle);
    constraints.push_back({pos, t});
    tangent_angles(std::acos(std::clamp(pos.along, -1.0, 1.0)), t, 0.0, rho, cuts);
  }
  std::optional<FramePosition> kpos;
  if (kernel) {
    kpos = locate(kernel->axis, p, e1, e2);
    const double beta = std::acos(std::clamp(kpos->along, -1.0, 1.0));
    tangent_angles(beta, kernel->low, 0.0, rho, cuts);
    if (kernel->high > kernel->low) tangent_angles(beta, kernel->high, 0.0, rho, cuts);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto ring = [&](double theta) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    std::vector<Interval> arcs{{0.0, kTwoPi}};
    for (const auto& c : constraints) {
      const double a = ct * c.pos.along;
      const double b = st * c.pos.across;
      std::vector<Interval> allowed;
      if (b <= kTiny) {
        if (a >= c.threshold) allowed.push_back({0.0, kTwoPi});
      } else {
        allowed = arc_where(c.pos.azimuth, (c.threshold - a) / b);
      }
      arcs = intersect(arcs, allowed);
      if (arcs.empty()) return 0.0;
    }
    double sum = 0.0;
    if (!kernel) {
      for (const auto& iv : arcs) sum += iv.hi - iv.lo;
    } else {
      const KernelAntiderivative g(*kernel, ct * kpos->along, st * kpos->across);
      for (const auto& iv : arcs) sum += g(iv.hi - kpos->azimuth) - g(iv.lo - kpos->azimuth);
    }
    return st * sum;
  };

  CapIntegral out;
  const double span = rho;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double w = cuts[i + 1] - a;
    if (w <= 0.0) continue;
    // Smoothstep substitution flattens the square-root behaviour at
    // tangencies, which sit on the piece endpoints.
    auto f = [&](double s) {
      const double theta = a + w * s * s * (3.0 - 2.0 * s);
      return ring(theta) * 6.0 * w * s * (1.0 - s);
    };
    const double piece_tol = 4.0 * kPi * tol * (w / span);
    const QuadratureResult q = adaptive_simpson(f, 0.0, 1.0, piece_tol);
    out.value += q.value;
    out.error += q.error_estimate;
    out.converged = out.converged && q.converged;
  }
  out.value /= 4.0 * kPi;
  out.error /= 4.0 * kPi;
  return out;
}

}  // namespace qmachine
