#pragma once

#include <array>
#include <numbers>

#include "qmachine/random.hpp"

namespace qmachine {

inline constexpr double kPi = std::numbers::pi;

/// A point of the unit sphere in R^3.
class UnitVector {
 public:
  /// Normalizes (x, y, z). Throws DomainError for a zero or non-finite input.
  static UnitVector normalized(double x, double y, double z);
  /// Point with polar angle `theta` from +z and azimuth `phi` from +x.
  static UnitVector from_spherical(double theta, double phi);

  static UnitVector north() { return UnitVector(0.0, 0.0, 1.0); }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  double dot(const UnitVector& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }
  UnitVector operator-() const { return UnitVector(-x_, -y_, -z_); }

  /// Polar angle in [0, pi].
  double polar() const;
  /// Azimuth in (-pi, pi]; zero at the poles.
  double azimuth() const;

  /// Two unit vectors completing this one to a right-handed orthonormal frame.
  std::array<UnitVector, 2> orthonormal_complement() const;

  bool operator==(const UnitVector&) const = default;

 private:
  UnitVector(double x, double y, double z) : x_(x), y_(y), z_(z) {}

  double x_, y_, z_;
};

/// A pure state of the particle is its position on the sphere.
using SphereState = UnitVector;

/// Clamps a dot product into [-1, 1]. Values farther than 1e-9 outside
/// the interval indicate a real error and throw DomainError.
double clamp_cosine(double c);

/// Angle in [0, pi] between two unit vectors.
double angle_between(const UnitVector& a, const UnitVector& b);

enum class Boundary { Open, Closed };

/// The set {v : v . center >= cos(half_angle)} (or > when open).
struct SectorCap {
  UnitVector center = UnitVector::north();
  double half_angle = 0.0;
  Boundary boundary = Boundary::Closed;

  /// Throws DomainError unless half_angle lies in [0, pi].
  static SectorCap make(const UnitVector& center, double half_angle,
                        Boundary boundary = Boundary::Closed);

  /// Membership with zero tolerance. Open and closed caps differ only on
  /// their boundary circle, which carries no measure.
  bool contains(const UnitVector& v) const;
  /// Uniform-measure fraction of the sphere covered by the cap.
  double area_fraction() const;
  /// Closure-flipped cap around the antipode covering the complement.
  SectorCap complement() const;

  bool operator==(const SectorCap&) const = default;
};

struct SectorAngles {
  double lambda;  ///< half-angle of the eigenstate cap of outcome 1, around u
  double mu;      ///< half-angle of the eigenstate cap of outcome 2, around -u
};

/// cos(lambda) = epsilon + d and cos(mu) = epsilon - d.
SectorAngles sector_angles(double epsilon, double d);

/// (1 - cos(half_angle)) / 2.
double cap_area_fraction(double half_angle);

UnitVector sample_uniform_sphere(RandomStream& stream);
/// Throws DomainError for a zero-radius cap.
UnitVector sample_uniform_cap(RandomStream& stream, const SectorCap& cap);

}  // namespace qmachine
