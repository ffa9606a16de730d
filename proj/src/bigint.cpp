#include "qpc/bigint.hpp"

#include "qpc/errors.hpp"

#include <cctype>
#include <cmath>

namespace qpc {

Rational rational_from_decimal(const std::string& text) {
    std::string t;
    t.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw input_error("empty numeric literal");

    bool neg = false;
    std::size_t i = 0;
    if (t[0] == '+' || t[0] == '-') { neg = (t[0] == '-'); i = 1; }

    std::string digits;
    long frac_digits = -1;
    for (; i < t.size(); ++i) {
        char c = t[i];
        if (c == '.') {
            if (frac_digits >= 0) throw input_error("malformed numeric literal: " + text);
            frac_digits = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (frac_digits >= 0) ++frac_digits;
        } else {
            throw input_error("malformed numeric literal: " + text);
        }
    }
    if (digits.empty()) throw input_error("malformed numeric literal: " + text);
    if (frac_digits < 0) frac_digits = 0;

    Bigint num(digits, 10);
    if (neg) num = -num;
    Bigint den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational rational_from_double(double x) {
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }
double to_double(const Bigint& z) { return mpz_get_d(z.get_mpz_t()); }

double ln_to_double(const Bigint& z) {
    if (z <= 0) throw numeric_error("ln of non-positive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * 0.6931471805599453094;
}

Bigint pow_ui(const Bigint& base, unsigned long e) {
    Bigint out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

Bigint fdiv(const Bigint& num, const Bigint& den) {
    Bigint out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

} // namespace qpc
