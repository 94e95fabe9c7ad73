#include "qmachine/rational.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "qmachine/errors.hpp"

namespace qmachine {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned k) {
  cpp_int r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// cpp_int reads a leading 0 as an octal prefix.
cpp_int from_digits(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return cpp_int{std::string(digits.substr(first))};
}

cpp_int parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw UsageError("not an integer: '" + std::string(s) + "'");
  const cpp_int v = from_digits(s);
  return neg ? cpp_int(-v) : v;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const std::string_view exp_text = s.substr(e + 1);
    const auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                           exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) {
      throw UsageError("bad exponent in '" + std::string(text) + "'");
    }
    s = s.substr(0, e);
  }
  std::string digits;
  std::size_t fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw UsageError("not a decimal: '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    fraction_digits = frac.size();
  } else {
    if (!all_digits(s)) throw UsageError("not a number: '" + std::string(text) + "'");
    digits = std::string(s);
  }
  const long scale = exponent - static_cast<long>(fraction_digits);
  Rational value{from_digits(digits)};
  if (scale >= 0) {
    value *= Rational(pow10(static_cast<unsigned>(scale)));
  } else {
    value /= Rational(pow10(static_cast<unsigned>(-scale)));
  }
  return neg ? Rational(-value) : value;
}

cpp_int floor_of(const Rational& r) {
  const cpp_int n = boost::multiprecision::numerator(r);
  const cpp_int d = boost::multiprecision::denominator(r);
  cpp_int q = n / d;
  if (q * d > n) --q;
  return q;
}

/// Continued-fraction recursion for the simplest fraction in [a, b], 0 < a <= b.
Rational simplest_in(const Rational& a, const Rational& b) {
  const cpp_int n = floor_of(a);
  if (Rational(n) == a) return a;
  if (Rational(n + 1) <= b) return Rational(n + 1);
  return Rational(n) + 1 / simplest_in(1 / (b - n), 1 / (a - n));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw UsageError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_int(text.substr(0, slash));
    const cpp_int den = parse_int(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  return parse_decimal(text);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw UsageError("non-finite probability");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw UsageError("cannot format number");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

Rational simplest_rational_within(double x, double tol) {
  const Rational lo = rational_from_double(x - tol);
  const Rational hi = rational_from_double(x + tol);
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_in(-hi, -lo);
  return simplest_in(lo, hi);
}

std::string format_rational(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  cpp_int rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest == 1) {
    const cpp_int scale = pow10(std::max(twos, fives));
    const cpp_int factor = scale / den;
    return cpp_int(num * factor).str() + "/" + scale.str();
  }
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace qmachine
