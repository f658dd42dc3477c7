#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace limitlab {

// Exact arithmetic carriers. cpp_rational keeps the denominator positive and
// the fraction in lowest terms, which is exactly the invariant we need.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Correctly rounded (round-half-even) conversion to double. Deterministic
// across platforms and library versions, unlike convert_to<double>().
double to_double(const Rational& q);

// Parses "a/b", a plain integer, or a decimal literal like "0.25" into an
// exact rational. Throws validation_error on malformed input.
Rational parse_rational(const std::string& text);

// "num/den" in lowest terms, e.g. "35/8" or "3".
std::string to_string(const Rational& q);

// Shortest round-trip decimal for a double ("0.1", "1e-09", ...). This is the
// canonical float form used in every CSV the project writes.
std::string format_double(double x);

}  // namespace limitlab
