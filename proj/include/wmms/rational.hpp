#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace wmms {

// Exact rational number. All fairness guarantees in this library are checked
// with exact arithmetic; floating point never enters a value comparison.
using Rat = mpq_class;

// Canonicalized rational from an integer pair.
Rat make_rat(long num, long den = 1);

// Parses "p/q", plain integers ("-3"), and decimal strings ("3.50", "-0.125").
// Throws ValidationError on anything else.
Rat parse_rational(std::string_view text);

// "p/q", or just "p" when the denominator is 1.
std::string to_fraction_string(const Rat& q);

// Fixed-point decimal rendering with `digits` places, rounded half away from
// zero. Computed with integer arithmetic only, so output is deterministic.
std::string to_decimal_string(const Rat& q, int digits = 6);

// mantissa / 2^bits as an exact rational.
Rat rat_from_bits(std::uint64_t mantissa, unsigned bits);

}  // namespace wmms
