#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qmachine {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a decimal with optional exponent
/// ("0.78", "-1.5e-3") into an exact fraction. Throws UsageError otherwise.
Rational parse_rational(std::string_view text);

/// Exact value of the shortest decimal that round-trips to `x`, so a JSON
/// number written as 0.78 becomes 78/100 rather than its binary expansion.
Rational rational_from_double(double x);

/// The fraction with the smallest denominator inside [x - tol, x + tol].
Rational simplest_rational_within(double x, double tol);

/// "p/q". Fractions with a terminating decimal expansion are written over
/// the smallest sufficient power of ten ("28/100"); integers as "n".
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

}  // namespace qmachine
