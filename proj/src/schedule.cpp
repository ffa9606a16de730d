#include "qpc/schedule.hpp"

#include "qpc/certify.hpp"
#include "qpc/errors.hpp"

#include <sstream>

namespace qpc::scheme {

using certify::Cmp;

std::vector<freq::Convergent> all_convergents(const freq::Frequency& f) {
    return freq::cf_convergents(f, f.available() + 1);
}

std::size_t next_qtilde_index(const std::vector<freq::Convergent>& convs,
                              std::size_t start_index, const Bigint& qtilde,
                              const Rational& zeta) {
    for (std::size_t j = start_index + 1; j < convs.size(); ++j) {
        // q_j > qtilde^zeta  <=>  qtilde^zeta < q_j
        if (certify::cmp_mul_pow(1, qtilde, zeta, Rational(convs[j].q)) == Cmp::less)
            return j;
    }
    std::ostringstream msg;
    msg << "schedule: convergent stream exhausted searching for the smallest q_j > "
        << qtilde.get_str() << "^" << to_double(zeta);
    throw input_error(msg.str());
}

namespace {

// C1 qtilde^sigma < N and 2N < C2 qtilde^sigma1
bool certify_window(const ParameterBundle& b, const Bigint& qtilde, const Bigint& N,
                    std::string& violation) {
    if (certify::cmp_mul_pow(b.C1, qtilde, b.sigma, Rational(N)) != Cmp::less) {
        violation = "(Ns) C1 qtilde^sigma < N";
        return false;
    }
    if (certify::cmp_mul_pow(b.C2, qtilde, b.sigma1, Rational(2 * N)) != Cmp::greater) {
        violation = "(Ns) 2N < C2 qtilde^sigma1";
        return false;
    }
    return true;
}

// qtilde_prev^(zeta sigma - sigma1) < m and 2m < exp((c/10) qtilde_prev^gamma)
bool certify_ratio(const ParameterBundle& b, const Bigint& qtilde_prev, const Bigint& m,
                   std::string& violation) {
    Rational expo = b.zeta_sigma_minus_sigma1();
    if (!(expo > 0)) {
        violation = "(ms) zeta sigma - sigma1 > 0";
        return false;
    }
    if (certify::cmp_mul_pow(1, qtilde_prev, expo, Rational(m)) != Cmp::less) {
        violation = "(ms) qtilde^(zeta sigma - sigma1) < m";
        return false;
    }
    if (certify::cmp_exp_pow(b.c / 10, qtilde_prev, b.gamma, Rational(2 * m)) !=
        Cmp::greater) {
        violation = "(ms) 2m < exp((c/10) qtilde^gamma)";
        return false;
    }
    return true;
}

} // namespace

Bigint window_floor_n0(const ParameterBundle& bundle, const Bigint& qtilde0) {
    return certify::floor_mul_pow(bundle.C1, qtilde0, bundle.sigma, 1) + 1;
}

ScaleSchedule build_schedule(const std::vector<freq::Convergent>& convs,
                             const ParameterBundle& bundle, std::size_t q0_index,
                             std::size_t depth, const Bigint& N0, bool strict,
                             std::string freq_label) {
    if (q0_index >= convs.size())
        throw input_error("schedule: q0 convergent index out of range");
    if (N0 < 1) throw input_error("schedule: need N0 >= 1");
    {
        auto bad = violated_invariants(bundle);
        if (!bad.empty())
            throw input_error("schedule: inconsistent bundle: " + bad.front());
    }

    ScaleSchedule sched;
    sched.freq_label = std::move(freq_label);
    sched.feasible = true;

    ScheduleEntry e0;
    e0.s_index = 0;
    e0.conv_index = q0_index;
    e0.qtilde = convs[q0_index].q;
    e0.N = N0;
    e0.m = 1;
    e0.cert_qs = true;  // no selection constraint at s = 0
    e0.cert_ms = true;  // no ratio constraint at s = 0
    e0.cert_Ns = certify_window(bundle, e0.qtilde, e0.N, e0.violation);
    sched.feasible = e0.cert_Ns;
    sched.entries.push_back(e0);
    if (strict && !sched.feasible) return sched;

    for (std::size_t s = 1; s <= depth; ++s) {
        const ScheduleEntry& prev = sched.entries.back();
        ScheduleEntry e;
        e.s_index = s;
        e.conv_index = next_qtilde_index(convs, prev.conv_index, prev.qtilde, bundle.zeta);
        e.qtilde = convs[e.conv_index].q;
        e.cert_qs = true;  // smallest-past-threshold by construction of the scan
        e.m = certify::floor_mul_pow(bundle.C1 + bundle.C2, e.qtilde, bundle.sigma, prev.N) + 1;
        e.N = e.m * prev.N;
        e.cert_Ns = certify_window(bundle, e.qtilde, e.N, e.violation);
        bool ok_ms = certify_ratio(bundle, prev.qtilde, e.m, e.violation);
        e.cert_ms = ok_ms;
        if (!e.cert_Ns || !e.cert_ms) sched.feasible = false;
        sched.entries.push_back(e);
        if (strict && !sched.feasible) return sched;
    }
    return sched;
}

ScaleSchedule build_schedule(const freq::Frequency& f, const ParameterBundle& bundle,
                             std::size_t q0_index, std::size_t depth, const Bigint& N0,
                             bool strict) {
    return build_schedule(all_convergents(f), bundle, q0_index, depth, N0, strict,
                          f.label());
}

std::optional<ScaleSchedule> smallest_certifying_q0(
    const std::vector<freq::Convergent>& convs, const ParameterBundle& bundle,
    std::size_t depth, std::string freq_label) {
    for (std::size_t j = 1; j < convs.size(); ++j) {
        Bigint n0 = window_floor_n0(bundle, convs[j].q);
        try {
            ScaleSchedule s = build_schedule(convs, bundle, j, depth, n0, true, freq_label);
            if (s.feasible) return s;
        } catch (const input_error&) {
            // stream exhausted before depth levels fit above this q0; no
            // larger q0 can fit either
            return std::nullopt;
        }
    }
    return std::nullopt;
}

} // namespace qpc::scheme
