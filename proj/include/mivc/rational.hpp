#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace mivc {

// All numeric values in the tool are exact rationals. Binary floating point
// never appears between the input file and the solver.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Parses a decimal literal ("0", "2.5", "-0.125") into an exact rational.
std::optional<Rational> parse_decimal(const std::string& text);

// Parses an SMT-LIB value term: decimals, integers, (/ p q), (- t) and
// nestings thereof.
std::optional<Rational> parse_smt_numeral(const std::string& text);

// Renders as an SMT-LIB Real term: "p.0", "(/ p.0 q.0)", "(- ...)".
std::string to_smt_real(const Rational& r);

// Renders as an SMT-LIB Int term: "n" or "(- n)".
std::string to_smt_int(const Integer& n);

// Compact human form: "3", "-1/2".
std::string to_display(const Rational& r);

}  // namespace mivc
