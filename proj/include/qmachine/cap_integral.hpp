#pragma once

#include <optional>
#include <span>

#include "qmachine/sphere.hpp"

namespace qmachine {

/// Response g(v . axis) that is 0 below `low`, 1 above `high` and linear in
/// between. With low == high it is a unit step at that height.
struct ClampedKernel {
  UnitVector axis;
  double low;
  double high;

  double operator()(double x) const;
};

struct CapIntegral {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Integral over the intersection of `caps` of the kernel (or of 1 when no
/// kernel is given), normalized so that the whole sphere has measure 1.
///
/// The polar angle around the narrowest cap is integrated by adaptive
/// Simpson; at each polar angle the admissible azimuths form a union of
/// arcs and the kernel is integrated over them in closed form. The polar
/// range is split at every angle where a circle of latitude becomes tangent
/// to a cap boundary or a kernel threshold plane.
CapIntegral integrate_over_caps(std::span<const SectorCap> caps,
                                const std::optional<ClampedKernel>& kernel, double tol);

}  // namespace qmachine
