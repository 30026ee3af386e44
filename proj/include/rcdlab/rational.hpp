#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rcdlab {

/// Exact rational scalar. Every finite-space identity is checked with strict
/// equality on values of this type.
using Rational = mpq_class;

/// Builds num/den in canonical form. Throws std::invalid_argument on den == 0.
Rational make_rational(long num, long den = 1);

/// Parses "p/q" or "p" (optionally signed). Throws ParseError on malformed
/// text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Formats as "p/q"; integers keep the denominator ("1/1").
std::string to_string(const Rational& q);

double to_double(const Rational& q);

} // namespace rcdlab
