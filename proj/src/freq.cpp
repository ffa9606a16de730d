#include "qpc/freq.hpp"

#include "qpc/detail/splitmix.hpp"
#include "qpc/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace qpc::freq {

namespace {

using detail::SplitMix64;

// Largest ln-value for which we materialize floor(exp(C q^eta)) exactly.
constexpr double kMaxExtremalLn = 2000.0;

// floor of a lower bound of exp(c_alpha * q^eta); rounding everything down
// keeps the generated denominators certified below exp(c_alpha q^eta).
Bigint exp_pow_floor_down(double c_alpha, const Bigint& q, double eta) {
    mpfr_t x, e;
    mpfr_init2(x, 128);
    mpfr_init2(e, 128);
    mpfr_set_z(x, q.get_mpz_t(), MPFR_RNDD);
    mpfr_set_d(e, eta, MPFR_RNDD);
    mpfr_pow(x, x, e, MPFR_RNDD);
    mpfr_mul_d(x, x, c_alpha, MPFR_RNDD);
    mpfr_exp(x, x, MPFR_RNDD);
    Bigint out;
    mpfr_get_z(out.get_mpz_t(), x, MPFR_RNDD);
    mpfr_clear(x);
    mpfr_clear(e);
    return out;
}

// Whether the minimal continuation q_{n+1} <= factor*q_n keeps the class
// bound with comfortable slack (used once exp(C q^eta) is too large to
// materialize).
bool tame_feasible(double c_alpha, const Bigint& q, double eta, double factor) {
    double lnq = ln_to_double(q);
    double need = std::log(factor) + lnq;
    double expo = eta * lnq;
    if (expo > 709.0) return true;  // C*q^eta dwarfs any ln(factor*q)
    return c_alpha * std::exp(expo) >= need * (1.0 + 1e-9);
}

struct OmegaSim {
    std::vector<Bigint> coeffs;
    std::vector<std::size_t> designated;
    bool ok = false;
};

OmegaSim run_omega(double eta, double c_alpha, std::uint64_t seed, const Bigint& a1,
                   std::size_t horizon) {
    OmegaSim sim;
    SplitMix64 bits(seed);
    sim.coeffs.push_back(a1);
    Bigint q_prev = 1;   // q_0
    Bigint q_cur = a1;   // q_1
    for (std::size_t n = 1; n + 1 <= horizon; ++n) {
        // choosing a_{n+1}; the pair constraint ln q_{n+1} <= C q_n^eta applies
        double ln_bound = c_alpha * std::exp(eta * ln_to_double(q_cur));
        bool materializable = std::isfinite(ln_bound) && ln_bound <= kMaxExtremalLn;
        Bigint a;
        bool extremal = false;
        if (materializable) {
            Bigint cap = exp_pow_floor_down(c_alpha, q_cur, eta);
            Bigint a_max = fdiv(cap - q_prev, q_cur);
            if (a_max < 1) return sim;  // bound infeasible at pair n
            if (a_max >= 2) {
                a = a_max;
                extremal = true;
            } else {
                a = 1;
            }
        } else {
            if (!tame_feasible(c_alpha, q_cur, eta, 2.0)) return sim;
            a = 1;
            if (tame_feasible(c_alpha, q_cur, eta, 3.0) && bits.bit()) a = 2;
        }
        if (extremal) sim.designated.push_back(n);
        sim.coeffs.push_back(a);
        Bigint q_next = a * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
    }
    sim.ok = true;
    return sim;
}

} // namespace

Frequency Frequency::from_coeffs(std::vector<Bigint> coeffs, std::size_t period,
                                 std::string label, std::size_t horizon) {
    if (coeffs.empty()) throw input_error("frequency: empty coefficient list");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] < 1)
            throw input_error("frequency: coefficient a_" + std::to_string(i + 1) +
                              " must be >= 1");
    if (period > coeffs.size())
        throw input_error("frequency: period exceeds coefficient count");
    Frequency f;
    f.label_ = std::move(label);
    if (period == 0) {
        f.coeffs_ = std::move(coeffs);
        f.exhaustible_ = true;
    } else {
        f.coeffs_ = std::move(coeffs);
        std::size_t base = f.coeffs_.size();
        f.coeffs_.reserve(horizon);
        while (f.coeffs_.size() < horizon)
            f.coeffs_.push_back(f.coeffs_[f.coeffs_.size() - period]);
        f.exhaustible_ = false;
        (void)base;
    }
    return f;
}

Frequency Frequency::golden(std::size_t horizon) {
    return from_coeffs({Bigint(1)}, 1, "golden", horizon);
}

Frequency Frequency::silver(std::size_t horizon) {
    return from_coeffs({Bigint(2)}, 1, "silver", horizon);
}

Frequency Frequency::omega_eta(double eta, double c_alpha, std::size_t depth,
                               std::uint64_t seed, std::size_t horizon) {
    if (!(eta > 0.0 && eta < 1.0)) throw input_error("omega_eta: need 0 < eta < 1");
    if (!(c_alpha > 0.0)) throw input_error("omega_eta: need C_alpha > 0");
    if (depth < 1) throw input_error("omega_eta: need depth >= 1");
    if (horizon == 0) horizon = std::max<std::size_t>(1024, 2 * depth);

    // The seed pair q_0 = 1 is unconstrained, so a_1 is free; search for the
    // smallest a_1 whose downstream stream keeps the bound at every pair.
    constexpr unsigned long kA1Cap = 1000000;
    for (unsigned long a1 = 1; a1 <= kA1Cap; ++a1) {
        OmegaSim sim = run_omega(eta, c_alpha, seed, Bigint(a1), horizon);
        if (!sim.ok) continue;
        if (sim.coeffs.front() < 1) throw input_error("omega_eta: parameters force a_1 < 1");
        Frequency f;
        std::ostringstream name;
        name << "omega(eta=" << eta << ",C=" << c_alpha << ",depth=" << depth
             << ",seed=" << seed << ")";
        f.label_ = name.str();
        f.coeffs_ = std::move(sim.coeffs);
        f.designated_ = std::move(sim.designated);
        f.exhaustible_ = false;
        return f;
    }
    throw input_error("omega_eta: no feasible a_1 up to 10^6 for these parameters");
}

const Bigint& Frequency::coeff(std::size_t n) const {
    if (n < 1 || n > coeffs_.size()) {
        std::ostringstream msg;
        msg << "frequency '" << label_ << "': coefficient a_" << n
            << " requested but the stream provides " << coeffs_.size() << " terms";
        throw input_error(msg.str());
    }
    return coeffs_[n - 1];
}

std::vector<Convergent> cf_convergents(const Frequency& f, std::size_t count) {
    if (count < 1) throw input_error("cf_convergents: need count >= 1");
    if (count >= 2 && f.available() < count - 1) {
        std::ostringstream msg;
        msg << "cf_convergents: stream '" << f.label() << "' provides " << f.available()
            << " coefficients, need " << (count - 1);
        throw input_error(msg.str());
    }
    std::vector<Convergent> out;
    out.reserve(count);
    Bigint p_prev = 1, q_prev = 0;  // index -1 seeds
    Bigint p_cur = 0, q_cur = 1;    // index 0
    out.push_back({0, p_cur, q_cur});
    for (std::size_t n = 1; n < count; ++n) {
        const Bigint& a = f.coeff(n);
        Bigint p_next = a * p_cur + p_prev;
        Bigint q_next = a * q_cur + q_prev;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;
        Bigint g;
        mpz_gcd(g.get_mpz_t(), p_cur.get_mpz_t(), q_cur.get_mpz_t());
        if (g != 1) throw numeric_error("cf_convergents: non-coprime convergent");
        out.push_back({n, p_cur, q_cur});
    }
    return out;
}

FrequencyClassReport classify_frequency(const std::vector<Convergent>& convs,
                                        double eta, double tau) {
    if (convs.size() < 3) throw input_error("classify_frequency: need at least 3 convergents");
    if (!(eta > 0.0 && eta < 1.0)) throw input_error("classify_frequency: need 0 < eta < 1");
    if (!(tau > 1.0)) throw input_error("classify_frequency: need tau > 1");

    FrequencyClassReport rep;
    rep.eta = eta;
    rep.tau = tau;
    std::size_t n_max = convs.size() - 2;
    for (ClassEntry* e : {&rep.bounded, &rep.sdc, &rep.dc, &rep.omega, &rep.brjuno})
        e->n_max = n_max;

    auto consider = [](ClassEntry& e, std::size_t n, double ratio) {
        if (ratio > e.witness) {
            e.witness = ratio;
            e.worst_ratio = ratio;
            e.worst_index = n;
        }
    };

    double brjuno_sum = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const Bigint& qn = convs[n].q;
        const Bigint& qn1 = convs[n + 1].q;
        double lnq = ln_to_double(qn);
        double lnq1 = ln_to_double(qn1);

        consider(rep.bounded, n, to_double(Rational(qn1, qn)));
        consider(rep.dc, n, std::exp(lnq1 - tau * lnq));
        if (qn >= 2)
            consider(rep.sdc, n, std::exp(lnq1 - lnq - tau * std::log(lnq)));
        consider(rep.omega, n, std::exp(std::log(lnq1) - eta * lnq));
        brjuno_sum += std::exp(std::log(lnq1) - lnq);
    }
    rep.brjuno.witness = brjuno_sum;
    rep.brjuno.worst_ratio = brjuno_sum;
    rep.brjuno.worst_index = n_max;
    return rep;
}

double FixedPointAngle::to_double() const {
    if (bits <= 53)
        return std::ldexp(mpz_get_d(numerator.get_mpz_t()), -static_cast<int>(bits));
    Bigint top = numerator >> (bits - 53);
    return std::ldexp(mpz_get_d(top.get_mpz_t()), -53);
}

FixedPointAngle make_angle(const Bigint& numerator, unsigned bits) {
    if (bits == 0) throw input_error("angle: bits must be positive");
    if (numerator < 0) throw input_error("angle: numerator must be nonnegative");
    Bigint mod = Bigint(1) << bits;
    if (numerator >= mod) throw input_error("angle: numerator out of range");
    return FixedPointAngle{numerator, bits};
}

FixedPointAngle alpha_fixed_point(const Frequency& f, unsigned bits) {
    Bigint threshold = Bigint(1) << bits;
    Bigint p_prev = 1, q_prev = 0;
    Bigint p_cur = 0, q_cur = 1;
    std::size_t n = 0;
    while (q_cur <= threshold) {
        ++n;
        if (f.exhaustible() && n > f.available()) {
            std::ostringstream msg;
            msg << "frequency '" << f.label() << "' has no convergent with q > 2^" << bits
                << " (stream exhausted at q = " << q_cur.get_str() << ")";
            throw input_error(msg.str());
        }
        const Bigint& a = f.coeff(n);
        Bigint p_next = a * p_cur + p_prev;
        Bigint q_next = a * q_cur + q_prev;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;
    }
    // nearest multiple of 2^-bits: floor((p*2^(bits+1) + q) / (2q))
    Bigint num = (p_cur << (bits + 1)) + q_cur;
    num = fdiv(num, 2 * q_cur);
    Bigint mod = Bigint(1) << bits;
    num %= mod;
    if (num < 0) num += mod;
    return FixedPointAngle{num, bits};
}

std::vector<FixedPointAngle> orbit_angles(const Frequency& f, const FixedPointAngle& theta0,
                                          std::size_t N, unsigned bits) {
    if (N < 1) throw input_error("orbit_angles: need N >= 1");
    if (theta0.bits != bits) throw input_error("orbit_angles: theta0 precision mismatch");
    unsigned need = (N > 1 ? std::bit_width(N - 1) : 0u) + 64u;
    if (bits < need) {
        std::ostringstream msg;
        msg << "orbit_angles: N = " << N << " requires at least " << need
            << " precision bits, got " << bits;
        throw input_error(msg.str());
    }
    FixedPointAngle alpha = alpha_fixed_point(f, bits);
    Bigint mask = (Bigint(1) << bits) - 1;
    std::vector<FixedPointAngle> out;
    out.reserve(N);
    Bigint cur = theta0.numerator;
    out.push_back(FixedPointAngle{cur, bits});
    for (std::size_t j = 1; j < N; ++j) {
        cur += alpha.numerator;
        cur &= mask;
        out.push_back(FixedPointAngle{cur, bits});
    }
    return out;
}

} // namespace qpc::freq
