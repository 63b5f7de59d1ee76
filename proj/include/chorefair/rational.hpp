#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace chorefair {

// Exact arbitrary-precision rational. GMP keeps results of arithmetic in
// lowest terms with a positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p/q" (q > 0, gcd(|p|, q) = 1) or the integer shorthand "p".
// Leading '+', leading zeros, whitespace and unreduced fractions are
// rejected. Throws ParseError.
Rational parse_rational(std::string_view text);

// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& value);

// Decimal rendering with exactly `digits` fractional digits, rounded half
// away from zero. Exact integer arithmetic throughout.
std::string to_decimal(const Rational& value, int digits = 12);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
    r.canonicalize();
    return r;
}

} // namespace chorefair
