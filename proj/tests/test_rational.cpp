#include <doctest.h>

#include "mivc/rational.hpp"

using namespace mivc;

TEST_CASE("decimal parsing is exact") {
  CHECK(*parse_decimal("0.5") == Rational(1, 2));
  CHECK(*parse_decimal("2.0") == Rational(2));
  CHECK(*parse_decimal("-0.125") == Rational(-1, 8));
  CHECK(*parse_decimal("10") == Rational(10));
  CHECK(!parse_decimal("1.2.3"));
  CHECK(!parse_decimal(""));
  CHECK(!parse_decimal("abc"));
}

TEST_CASE("smt numerals round-trip") {
  CHECK(*parse_smt_numeral("(/ 1.0 3.0)") == Rational(1, 3));
  CHECK(*parse_smt_numeral("(- 1.0)") == Rational(-1));
  CHECK(*parse_smt_numeral("(- (/ 2.0 4.0))") == Rational(-1, 2));
  CHECK(*parse_smt_numeral("7") == Rational(7));
  CHECK(to_smt_real(Rational(-3, 2)) == "(- (/ 3.0 2.0))");
  CHECK(to_smt_real(Rational(4)) == "4.0");
  CHECK(to_display(Rational(-3, 2)) == "-3/2");
}
