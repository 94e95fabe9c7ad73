#include "qmachine/spin.hpp"

#include <cmath>

namespace qmachine {

SpinState SpinObservable::apply(const SpinState& s) const {
  return {m[0][0] * s.c1 + m[0][1] * s.c2, m[1][0] * s.c1 + m[1][1] * s.c2};
}

std::array<double, 2> SpinObservable::eigenvalues() const {
  // Roots of x^2 - tr x + det for a Hermitian matrix; both real.
  const double tr = (m[0][0] + m[1][1]).real();
  const double det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

Complex inner_product(const SpinState& a, const SpinState& b) {
  return std::conj(a.c1) * b.c1 + std::conj(a.c2) * b.c2;
}

SpinState spin_state(const UnitVector& v) {
  const double theta = v.polar();
  const double phi = v.azimuth();
  return {std::polar(std::cos(theta / 2.0), -phi / 2.0), std::polar(std::sin(theta / 2.0), phi / 2.0)};
}

SpinObservable spin_operator(const UnitVector& u) {
  const double a = u.polar();
  const double b = u.azimuth();
  const double c = 0.5 * std::cos(a);
  const double s = 0.5 * std::sin(a);
  return {{{{Complex(c, 0.0), std::polar(s, -b)}, {std::polar(s, b), Complex(-c, 0.0)}}}};
}

double transition_probability(const UnitVector& u, const UnitVector& v) {
  return std::norm(inner_product(spin_state(u), spin_state(v)));
}

}  // namespace qmachine
