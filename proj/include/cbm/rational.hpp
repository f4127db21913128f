#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cbm {

// Exact rational scalar. GMP keeps values canonical (lowest terms,
// positive denominator) as long as they are produced through arithmetic
// or the helpers below.
using Rat = mpq_class;

// Parses "p/q" or a bare integer "p" (optional leading '-', surrounding
// whitespace tolerated). Throws std::invalid_argument on malformed input
// or a zero denominator.
Rat rat_from_string(std::string_view text);

// Canonical serialized form with the denominator always spelled out:
// "3/2", "3/1", "-1/15".
std::string rat_to_string(const Rat& value);

double rat_to_double(const Rat& value);

// value^k; exponent 0 gives 1.
Rat rat_pow(const Rat& value, unsigned long k);

// num/den as an exact rational; throws std::invalid_argument when den = 0.
Rat make_rat(const mpz_class& num, const mpz_class& den);

}  // namespace cbm
