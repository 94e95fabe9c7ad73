#include <doctest.h>

#include "qmachine/errors.hpp"
#include "qmachine/rational.hpp"

using namespace qmachine;

TEST_CASE("decimal and fraction parsing is exact") {
  CHECK(parse_rational("0.78") == Rational(39, 50));
  CHECK(parse_rational("078") == Rational(78));
  CHECK(parse_rational("-0.05") == Rational(-1, 20));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("2.5e-1") == Rational(1, 4));
  CHECK(parse_rational("1e2") == Rational(100));
  CHECK_THROWS_AS(parse_rational("abc"), UsageError);
  CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
}

TEST_CASE("rational_from_double uses the shortest decimal") {
  CHECK(rational_from_double(0.22) == Rational(11, 50));
  CHECK(rational_from_double(0.5) == Rational(1, 2));
}

TEST_CASE("simplest rational inside a tolerance window") {
  CHECK(simplest_rational_within(2.0 / 3.0, 1e-9) == Rational(2, 3));
  CHECK(simplest_rational_within(0.25 + 1e-12, 1e-9) == Rational(1, 4));
  CHECK(simplest_rational_within(1e-12, 1e-9) == Rational(0));
  const Rational r = simplest_rational_within(0.7817481737, 1e-9);
  CHECK(std::abs(to_double(r) - 0.7817481737) <= 1e-9);
}

TEST_CASE("formatting uses powers of ten when the decimal terminates") {
  CHECK(format_rational(Rational(7, 25)) == "28/100");
  CHECK(format_rational(Rational(11, 100)) == "11/100");
  CHECK(format_rational(Rational(-14, 11)) == "-14/11");
  CHECK(format_rational(Rational(3)) == "3");
  CHECK(format_rational(Rational(0)) == "0");
}
