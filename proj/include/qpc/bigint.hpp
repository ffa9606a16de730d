#pragma once

#include <gmpxx.h>

#include <string>

namespace qpc {

using Bigint   = mpz_class;
using Rational = mpq_class;

// Parses a decimal literal ("1.05", "-3", "0.55") into an exact rational.
// Config-facing constants go through this so that e.g. 1.05 means 21/20,
// not the nearest double.
Rational rational_from_decimal(const std::string& text);

// Exact conversion of a finite double (doubles are dyadic rationals).
Rational rational_from_double(double x);

// Nearest double for reporting. Not exact in general.
double to_double(const Rational& r);
double to_double(const Bigint& z);

// Natural log of a positive big integer, overflow-safe for values far beyond
// the double range.
double ln_to_double(const Bigint& z);

// z^e for unsigned e.
Bigint pow_ui(const Bigint& base, unsigned long e);

// floor(num/den) for den > 0.
Bigint fdiv(const Bigint& num, const Bigint& den);

} // namespace qpc
