#pragma once

#include "qpc/bigint.hpp"

namespace qpc::certify {

enum class Cmp { less, equal, greater };

// Certified comparison of coef * base^expo against rhs.
// Requires base >= 1, expo >= 0, coef > 0, rhs > 0.
//
// Evaluation is by interval arithmetic with directed rounding, starting at
// 128 bits and doubling until the interval separates from rhs. If the value
// is exactly rational (expo = p/q with manageable size) an exact big-integer
// comparison resolves ties.
Cmp cmp_mul_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                const Rational& rhs);

// Certified comparison of exp(coef * base^expo) against rhs. Same domain
// restrictions; ties cannot occur for a nonzero finite exponent.
Cmp cmp_exp_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                const Rational& rhs);

// Certified floor(coef * base^expo / den) for den >= 1.
Bigint floor_mul_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                     const Bigint& den);

// base^expo rounded to nearest double (reporting only; expo may be negative).
double pow_to_double(const Bigint& base, const Rational& expo);

} // namespace qpc::certify
