#ifndef NUEXPR_RATIONAL_HPP
#define NUEXPR_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace nuexpr {

/// Exact rational arithmetic. All probability mass in the toolkit is held as
/// canonicalized GMP rationals; no floating point is used anywhere.
using Rational = mpq_class;

/// Parses "p/q" or "p" with non-negative integer p, positive q.
/// Throws Error on anything else (signs, whitespace, zero denominator).
Rational parse_rational(const std::string& text);

/// Renders in lowest terms, as "p/q", or "p" when the denominator is 1.
std::string rational_to_string(const Rational& value);

} // namespace nuexpr

#endif
