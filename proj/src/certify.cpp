#include "qpc/certify.hpp"

#include "qpc/errors.hpp"

#include <mpfr.h>

#include <cstddef>

namespace qpc::certify {

namespace {

constexpr mpfr_prec_t kStartPrec = 128;
constexpr mpfr_prec_t kMaxPrec   = 1 << 15;

// Cost guard for the exact fallback: base^p gets |p| * bits(base) bits.
constexpr std::size_t kMaxExactBits = std::size_t(1) << 27;

struct Raii {
    mpfr_t v;
    explicit Raii(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~Raii() { mpfr_clear(v); }
    Raii(const Raii&) = delete;
    Raii& operator=(const Raii&) = delete;
};

void check_domain(const Rational& coef, const Bigint& base, const Rational& expo) {
    if (base < 1) throw numeric_error("certified compare: base must be >= 1");
    if (sgn(expo) < 0) throw numeric_error("certified compare: exponent must be >= 0");
    if (sgn(coef) <= 0) throw numeric_error("certified compare: coefficient must be > 0");
}

// One directed-rounding evaluation of coef * base^expo (optionally exp of it).
// All quantities are nonnegative, so rounding every step in the same
// direction yields a valid one-sided bound.
void eval_dir(mpfr_t out, const Rational& coef, const Bigint& base,
              const Rational& expo, bool take_exp, mpfr_rnd_t rnd, mpfr_prec_t prec) {
    Raii b(prec), e(prec);
    mpfr_set_z(b.v, base.get_mpz_t(), rnd);
    mpfr_set_q(e.v, expo.get_mpq_t(), rnd);
    mpfr_pow(out, b.v, e.v, rnd);               // base >= 1, expo >= 0 -> result >= 1
    Raii c(prec);
    mpfr_set_q(c.v, coef.get_mpq_t(), rnd);
    mpfr_mul(out, out, c.v, rnd);
    if (take_exp) mpfr_exp(out, out, rnd);
}

// -1 below rhs, +1 above rhs, 0 unresolved at this precision.
int interval_vs(const Rational& coef, const Bigint& base, const Rational& expo,
                bool take_exp, const Rational& rhs, mpfr_prec_t prec) {
    Raii lo(prec), hi(prec), r(prec);
    eval_dir(lo.v, coef, base, expo, take_exp, MPFR_RNDD, prec);
    eval_dir(hi.v, coef, base, expo, take_exp, MPFR_RNDU, prec);
    mpfr_set_q(r.v, rhs.get_mpq_t(), MPFR_RNDN);
    if (mpfr_cmp(hi.v, r.v) < 0) return -1;
    if (mpfr_cmp(lo.v, r.v) > 0) return +1;
    return 0;
}

// Exact comparison of coef * base^(p/q) with rhs by clearing the q-th root:
//   (cn/cd) * base^(p/q) ? (rn/rd)
//   <=>  cn^q * base^p * rd^q  ?  rn^q * cd^q        (all factors positive)
Cmp exact_mul_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                  const Rational& rhs) {
    const Bigint& en = expo.get_num();
    const Bigint& ed = expo.get_den();
    if (!en.fits_ulong_p() || !ed.fits_ulong_p())
        throw numeric_error("certified compare: exponent too large for exact fallback");
    unsigned long p = en.get_ui(), q = ed.get_ui();
    std::size_t base_bits = mpz_sizeinbase(base.get_mpz_t(), 2);
    if (p * base_bits > kMaxExactBits)
        throw numeric_error("certified compare: indeterminate (exact fallback too large)");

    Bigint lhs = pow_ui(coef.get_num(), q) * pow_ui(base, p) * pow_ui(rhs.get_den(), q);
    Bigint rhsz = pow_ui(rhs.get_num(), q) * pow_ui(coef.get_den(), q);
    int c = cmp(lhs, rhsz);
    return c < 0 ? Cmp::less : (c > 0 ? Cmp::greater : Cmp::equal);
}

} // namespace

Cmp cmp_mul_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                const Rational& rhs) {
    check_domain(coef, base, expo);
    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        int r = interval_vs(coef, base, expo, false, rhs, prec);
        if (r < 0) return Cmp::less;
        if (r > 0) return Cmp::greater;
    }
    return exact_mul_pow(coef, base, expo, rhs);
}

Cmp cmp_exp_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                const Rational& rhs) {
    check_domain(coef, base, expo);
    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        int r = interval_vs(coef, base, expo, true, rhs, prec);
        if (r < 0) return Cmp::less;
        if (r > 0) return Cmp::greater;
    }
    // exp(x) with x != 0 is irrational; reaching this point means the
    // comparison straddles a value we cannot separate at 32k bits.
    throw numeric_error("certified compare: exp comparison indeterminate at max precision");
}

Bigint floor_mul_pow(const Rational& coef, const Bigint& base, const Rational& expo,
                     const Bigint& den) {
    check_domain(coef, base, expo);
    if (den < 1) throw numeric_error("certified floor: denominator must be >= 1");

    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        Raii lo(prec), hi(prec), d(prec);
        eval_dir(lo.v, coef, base, expo, false, MPFR_RNDD, prec);
        eval_dir(hi.v, coef, base, expo, false, MPFR_RNDU, prec);
        mpfr_set_z(d.v, den.get_mpz_t(), MPFR_RNDN);
        mpfr_div(lo.v, lo.v, d.v, MPFR_RNDD);
        mpfr_div(hi.v, hi.v, d.v, MPFR_RNDU);
        Bigint flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
        mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
        if (flo == fhi) return flo;
        if (fhi == flo + 1) {
            // The enclosure straddles the integer fhi: decide v >= fhi exactly.
            Rational cut(fhi * den);
            Cmp c = exact_mul_pow(coef, base, expo, cut);
            return c == Cmp::less ? flo : fhi;
        }
    }
    throw numeric_error("certified floor: indeterminate at max precision");
}

double pow_to_double(const Bigint& base, const Rational& expo) {
    Raii b(256), e(256), out(256);
    mpfr_set_z(b.v, base.get_mpz_t(), MPFR_RNDN);
    mpfr_set_q(e.v, expo.get_mpq_t(), MPFR_RNDN);
    mpfr_pow(out.v, b.v, e.v, MPFR_RNDN);
    return mpfr_get_d(out.v, MPFR_RNDN);
}

} // namespace qpc::certify
