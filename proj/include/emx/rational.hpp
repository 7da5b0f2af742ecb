#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace emx {

/// Exact arbitrary-precision rational. All probability masses and
/// expectations are carried in this type; floating point only appears at
/// reporting boundaries.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "n/d", "n", or a plain decimal such as "0.25" or "-1.5" exactly.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Always "numerator/denominator" in lowest terms, e.g. "1/1", "0/1", "-3/4".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

}  // namespace emx
