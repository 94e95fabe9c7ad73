#pragma once

#include <array>
#include <complex>

#include "qmachine/sphere.hpp"

namespace qmachine {

using Complex = std::complex<double>;

/// Normalized vector of C^2.
struct SpinState {
  Complex c1;
  Complex c2;

  double norm_squared() const { return std::norm(c1) + std::norm(c2); }
};

/// Hermitian 2x2 matrix [[a, b], [conj(b), d]] stored entry by entry.
struct SpinObservable {
  std::array<std::array<Complex, 2>, 2> m;

  SpinState apply(const SpinState& s) const;
  std::array<double, 2> eigenvalues() const;
};

Complex inner_product(const SpinState& a, const SpinState& b);

/// (e^{-i phi/2} cos(theta/2), e^{i phi/2} sin(theta/2)) for the direction
/// v = (theta, phi). The azimuth is taken as 0 at the poles.
SpinState spin_state(const UnitVector& v);

/// Spin component along u: 1/2 [[cos a, e^{-ib} sin a], [e^{ib} sin a, -cos a]].
SpinObservable spin_operator(const UnitVector& u);

/// |<psi_u, psi_v>|^2.
double transition_probability(const UnitVector& u, const UnitVector& v);

}  // namespace qmachine
