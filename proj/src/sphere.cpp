#include "qmachine/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmachine/errors.hpp"

namespace qmachine {

namespace {

constexpr double kClampSlack = 1e-9;
// Parameter-range slack so that values such as sqrt(2)/2 +- d computed in
// floating point are not rejected at the edge of their range.
constexpr double kRangeSlack = 1e-12;

}  // namespace

UnitVector UnitVector::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("cannot normalize a zero or non-finite vector");
  }
  return UnitVector(x / n, y / n, z / n);
}

UnitVector UnitVector::from_spherical(double theta, double phi) {
  const double s = std::sin(theta);
  return normalized(s * std::cos(phi), s * std::sin(phi), std::cos(theta));
}

double UnitVector::polar() const { return std::acos(clamp_cosine(z_)); }

double UnitVector::azimuth() const {
  if (x_ == 0.0 && y_ == 0.0) return 0.0;
  return std::atan2(y_, x_);
}

std::array<UnitVector, 2> UnitVector::orthonormal_complement() const {
  // Cross with the coordinate axis least aligned with this vector.
  double ax = 0.0, ay = 0.0, az = 0.0;
  const double fx = std::abs(x_), fy = std::abs(y_), fz = std::abs(z_);
  if (fx <= fy && fx <= fz) {
    ax = 1.0;
  } else if (fy <= fz) {
    ay = 1.0;
  } else {
    az = 1.0;
  }
  const UnitVector e1 = normalized(y_ * az - z_ * ay, z_ * ax - x_ * az, x_ * ay - y_ * ax);
  const UnitVector e2 = normalized(y_ * e1.z_ - z_ * e1.y_, z_ * e1.x_ - x_ * e1.z_,
                                   x_ * e1.y_ - y_ * e1.x_);
  return {e1, e2};
}

double clamp_cosine(double c) {
  if (std::isnan(c) || c > 1.0 + kClampSlack || c < -1.0 - kClampSlack) {
    throw DomainError("cosine out of range: " + std::to_string(c));
  }
  return std::clamp(c, -1.0, 1.0);
}

double angle_between(const UnitVector& a, const UnitVector& b) {
  return std::acos(clamp_cosine(a.dot(b)));
}

SectorCap SectorCap::make(const UnitVector& center, double half_angle, Boundary boundary) {
  if (!(half_angle >= 0.0 && half_angle <= kPi)) {
    throw DomainError("cap half-angle must lie in [0, pi]");
  }
  return SectorCap{center, half_angle, boundary};
}

bool SectorCap::contains(const UnitVector& v) const {
  return v.dot(center) >= std::cos(half_angle);
}

double SectorCap::area_fraction() const { return cap_area_fraction(half_angle); }

SectorCap SectorCap::complement() const {
  return SectorCap{-center, kPi - half_angle,
                   boundary == Boundary::Open ? Boundary::Closed : Boundary::Open};
}

SectorAngles sector_angles(double epsilon, double d) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [0, 1]");
  }
  if (!(d >= -1.0 + epsilon - kRangeSlack && d <= 1.0 - epsilon + kRangeSlack)) {
    throw DomainError("d must lie in [-1 + epsilon, 1 - epsilon]");
  }
  return {std::acos(std::clamp(epsilon + d, -1.0, 1.0)),
          std::acos(std::clamp(epsilon - d, -1.0, 1.0))};
}

double cap_area_fraction(double half_angle) {
  return 0.5 * (1.0 - std::cos(half_angle));
}

UnitVector sample_uniform_sphere(RandomStream& stream) {
  // Archimedes: the height is uniform on [-1, 1].
  const double z = stream.uniform(-1.0, 1.0);
  const double phi = stream.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVector::normalized(r * std::cos(phi), r * std::sin(phi), z);
}

UnitVector sample_uniform_cap(RandomStream& stream, const SectorCap& cap) {
  if (!(cap.half_angle > 0.0)) {
    throw DomainError("cannot sample a zero-radius cap");
  }
  const double h = stream.uniform(std::cos(cap.half_angle), 1.0);
  const double phi = stream.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - h * h));
  const auto [e1, e2] = cap.center.orthonormal_complement();
  const double a = r * std::cos(phi);
  const double b = r * std::sin(phi);
  const UnitVector& c = cap.center;
  return UnitVector::normalized(a * e1.x() + b * e2.x() + h * c.x(),
                                a * e1.y() + b * e2.y() + h * c.y(),
                                a * e1.z() + b * e2.z() + h * c.z());
}

}  // namespace qmachine
