#include "qpc/scheme.hpp"

#include "qpc/certify.hpp"
#include "qpc/errors.hpp"
#include "qpc/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace qpc::scheme {

using certify::Cmp;

namespace {

std::size_t to_ulong_checked(const Bigint& z, const char* what) {
    if (!z.fits_ulong_p()) {
        std::ostringstream msg;
        msg << what << " = " << z.get_str() << " exceeds the compute range";
        throw input_error(msg.str());
    }
    return z.get_ui();
}

} // namespace

InitialScaleResult find_initial_scale(const gevrey::MatrixFunction& A,
                                      const freq::Frequency& f,
                                      const freq::Convergent& qtilde0,
                                      const ParameterBundle& bundle,
                                      const cocycle::QuadratureSpec& spec) {
    InitialScaleResult res;
    res.window_lo = window_floor_n0(bundle, qtilde0.q);
    {
        Rational half_c2 = bundle.C2 / 2;
        res.window_hi = certify::floor_mul_pow(half_c2, qtilde0.q, bundle.sigma1, 1);
        if (certify::cmp_mul_pow(half_c2, qtilde0.q, bundle.sigma1,
                                 Rational(res.window_hi)) == Cmp::equal)
            res.window_hi -= 1;  // 2N < C2 q^sigma1 is strict
    }
    if (res.window_hi < res.window_lo) {
        std::ostringstream msg;
        msg << "find_initial_scale: window empty at qtilde0 = " << qtilde0.q.get_str()
            << " (lo = " << res.window_lo.get_str() << ", hi = " << res.window_hi.get_str()
            << ")";
        throw input_error(msg.str());
    }
    std::size_t nlo = to_ulong_checked(res.window_lo, "window lower edge");
    std::size_t nhi = to_ulong_checked(res.window_hi, "window upper edge");

    double kappa = to_double(bundle.kappa);
    auto probe = [&](std::size_t N, double& LN, double& L2N) {
        auto b = cocycle::le_batch(A, f, {N, 2 * N}, spec);
        LN = b.le[0].value;
        L2N = b.le[1].value;
        return L2N > 0.99 * LN;
    };

    // left-edge precondition L_N > 100 kappa
    double L_lo = 0.0, L2_lo = 0.0;
    bool lo_pass = probe(nlo, L_lo, L2_lo);
    if (!(L_lo > 100.0 * kappa)) {
        std::ostringstream msg;
        msg << "find_initial_scale: L_" << nlo << " = " << L_lo
            << " fails the hypothesis L_N > 100 kappa = " << 100.0 * kappa;
        throw input_error(msg.str());
    }

    auto note_best = [&res](std::size_t N, double LN, double L2N) {
        double r = LN > 0.0 ? L2N / LN : 0.0;
        if (r > res.best_ratio) {
            res.best_ratio = r;
            res.best_N = N;
        }
    };
    note_best(nlo, L_lo, L2_lo);

    std::size_t prev_fail = nlo;  // last mesh point known to fail
    std::size_t first_pass = 0;
    double pass_LN = 0.0, pass_L2N = 0.0;
    if (lo_pass) {
        first_pass = nlo;
        pass_LN = L_lo;
        pass_L2N = L2_lo;
    } else {
        double x = static_cast<double>(nlo);
        std::size_t N = nlo;
        while (true) {
            x *= 1.1;
            std::size_t next = std::max(N + 1, static_cast<std::size_t>(std::llround(x)));
            if (next > nhi) break;
            N = next;
            double LN = 0.0, L2N = 0.0;
            bool ok = probe(N, LN, L2N);
            note_best(N, LN, L2N);
            if (ok) {
                first_pass = N;
                pass_LN = LN;
                pass_L2N = L2N;
                break;
            }
            prev_fail = N;
        }
    }
    if (first_pass == 0) {
        res.found = false;
        return res;  // search-failure report with the best ratio seen
    }

    // refine to the smallest integer passing the test
    std::size_t lo_b = (first_pass == nlo) ? nlo - 1 : prev_fail;
    std::size_t hi_b = first_pass;
    while (hi_b - lo_b > 1) {
        std::size_t mid = lo_b + (hi_b - lo_b) / 2;
        if (mid < nlo) { lo_b = nlo - 1; continue; }
        double LN = 0.0, L2N = 0.0;
        bool ok = probe(mid, LN, L2N);
        note_best(mid, LN, L2N);
        if (ok) {
            hi_b = mid;
            pass_LN = LN;
            pass_L2N = L2N;
        } else {
            lo_b = mid;
        }
    }
    res.found = true;
    res.N0 = hi_b;
    res.L_N0 = pass_LN;
    res.L_2N0 = pass_L2N;
    note_best(hi_b, pass_LN, pass_L2N);
    return res;
}

ApReport avalanche_check(const std::vector<Mat2>& ms, double mu, double c_ap) {
    if (ms.size() < 3) throw input_error("avalanche_check: need n >= 3 matrices");
    if (!(mu > 0.0)) throw input_error("avalanche_check: need mu > 0");

    ApReport rep;
    rep.n = ms.size();
    rep.mu = mu;
    rep.c_ap = c_ap;
    rep.mu_exceeds_n = mu > static_cast<double>(rep.n);

    std::vector<double> lognorm(rep.n);
    for (std::size_t j = 0; j < rep.n; ++j) {
        double nrm = op_norm(ms[j]);
        lognorm[j] = std::log(nrm);
        if (!(nrm >= mu)) rep.norm_violations.push_back(j);
    }

    std::vector<double> logpair(rep.n - 1);
    double half_ln_mu = 0.5 * std::log(mu);
    for (std::size_t j = 0; j + 1 < rep.n; ++j) {
        Mat2 pair = ms[j + 1] * ms[j];
        logpair[j] = std::log(op_norm(pair));
        double defect = std::abs(lognorm[j] + lognorm[j + 1] - logpair[j]);
        if (!(defect < half_ln_mu)) rep.pair_violations.push_back(j);
    }
    rep.hypotheses_hold =
        rep.mu_exceeds_n && rep.norm_violations.empty() && rep.pair_violations.empty();

    // ln||prod M_j|| as a term list: renormalize by the operator norm every
    // step so telescoping fixtures cancel exactly in the final sum.
    std::vector<double> terms;
    terms.reserve(3 * rep.n);
    Mat2 p = Mat2::identity();
    for (std::size_t j = 0; j < rep.n; ++j) {
        p = ms[j] * p;
        double nrm = op_norm(p);
        if (!(std::isfinite(nrm) && nrm > 0.0))
            throw numeric_error("avalanche_check: degenerate product norm");
        terms.push_back(std::log(nrm));
        double inv = 1.0 / nrm;
        p.a *= inv; p.b *= inv; p.c *= inv; p.d *= inv;
    }
    terms.push_back(std::log(op_norm(p)));
    for (std::size_t j = 1; j + 1 < rep.n; ++j) terms.push_back(lognorm[j]);
    for (std::size_t j = 0; j + 1 < rep.n; ++j) terms.push_back(-logpair[j]);

    rep.lhs = std::abs(exact_sum(terms));
    rep.ratio = rep.lhs * mu / static_cast<double>(rep.n);
    rep.conclusion_holds = rep.lhs < c_ap * static_cast<double>(rep.n) / mu;
    return rep;
}

TwoScaleEstimate two_scale_defect(const gevrey::MatrixFunction& A,
                                  const freq::Frequency& f, std::size_t N, std::size_t m,
                                  const freq::Convergent& q, const ParameterBundle& bundle,
                                  const cocycle::QuadratureSpec& spec) {
    if (N < 1 || m < 1) throw input_error("two_scale_defect: need N >= 1 and m >= 1");

    TwoScaleEstimate est;
    est.N = N;
    est.m = m;
    est.Nprime = m * N;
    est.q = q.q;

    std::set<std::size_t> ns{N, 2 * N, est.Nprime};
    std::vector<std::size_t> sorted(ns.begin(), ns.end());
    auto batch = cocycle::le_batch(A, f, sorted, spec);
    std::map<std::size_t, double> L;
    for (std::size_t j = 0; j < sorted.size(); ++j) L[sorted[j]] = batch.le[j].value;

    est.L_N = L[N];
    est.L_2N = L[2 * N];
    est.L_Nprime = L[est.Nprime];
    est.defect = std::abs(est.L_Nprime + est.L_N - 2.0 * est.L_2N);

    double qg = certify::pow_to_double(q.q, bundle.gamma);
    est.bound = std::exp(-0.5 * bundle.c_d() * qg) + 2.0 * est.L_N / static_cast<double>(m);

    double kappa = to_double(bundle.kappa);
    est.flag_LN_gt_90kappa = est.L_N > 90.0 * kappa;
    est.flag_L2N_ratio = est.L_2N > 0.9 * est.L_N;
    Rational c10 = bundle.c / 10;
    est.flag_m_window =
        certify::cmp_exp_pow(c10, q.q, bundle.gamma,
                             Rational(static_cast<unsigned long>(m))) == Cmp::greater;
    est.flag_m_window_vacuous =
        certify::cmp_exp_pow(c10, q.q, bundle.gamma, Rational(2)) != Cmp::greater;
    Rational n_rat(static_cast<unsigned long>(N));
    est.flag_window =
        certify::cmp_mul_pow(bundle.C1, q.q, bundle.sigma, n_rat) == Cmp::less &&
        certify::cmp_mul_pow(bundle.C2, q.q, bundle.sigma1, 2 * n_rat) == Cmp::greater;
    est.flag_q_ge_q0min = q.q >= bundle.q0_min;
    return est;
}

ExtrapolationResult extrapolation_error(const gevrey::MatrixFunction& A,
                                        const freq::Frequency& f,
                                        const ScaleSchedule& schedule,
                                        std::size_t deep_index,
                                        const ParameterBundle& bundle,
                                        const cocycle::QuadratureSpec& spec,
                                        std::size_t budget) {
    if (schedule.entries.empty()) throw input_error("extrapolation: empty schedule");
    if (deep_index >= schedule.entries.size())
        throw input_error("extrapolation: deep_index exceeds schedule depth");

    // budget check: the (Q2) row at the deepest step needs L_{2 N_deep}
    {
        Bigint need = 2 * schedule.entries[deep_index].N;
        if (!need.fits_ulong_p() || need.get_ui() > budget) {
            std::size_t feasible = 0;
            bool any = false;
            for (std::size_t s = 0; s < schedule.entries.size(); ++s) {
                Bigint w = 2 * schedule.entries[s].N;
                if (w.fits_ulong_p() && w.get_ui() <= budget) {
                    feasible = s;
                    any = true;
                }
            }
            std::ostringstream msg;
            msg << "extrapolation: N_deep = " << schedule.entries[deep_index].N.get_str()
                << " exceeds the budget " << budget << "; largest feasible depth = ";
            if (any) msg << feasible; else msg << "none";
            throw input_error(msg.str());
        }
    }

    std::set<std::size_t> ns;
    for (std::size_t s = 0; s <= deep_index; ++s) {
        std::size_t n = to_ulong_checked(schedule.entries[s].N, "schedule N");
        ns.insert(n);
        ns.insert(2 * n);
    }
    std::vector<std::size_t> sorted(ns.begin(), ns.end());
    auto batch = cocycle::le_batch(A, f, sorted, spec);
    std::map<std::size_t, double> L;
    for (std::size_t j = 0; j < sorted.size(); ++j) L[sorted[j]] = batch.le[j].value;

    ExtrapolationResult res;
    res.deep_index = deep_index;
    res.N0 = to_ulong_checked(schedule.entries[0].N, "N0");
    res.N_deep = to_ulong_checked(schedule.entries[deep_index].N, "N_deep");
    res.L_N0 = L[res.N0];
    res.L_2N0 = L[2 * res.N0];
    res.L_Ndeep = L[res.N_deep];
    res.error = std::abs(res.L_Ndeep + res.L_N0 - 2.0 * res.L_2N0);
    res.c_prime = to_double(bundle.c_prime);
    res.rate_reference = certify::pow_to_double(schedule.entries[0].qtilde, -bundle.c_prime);

    double c0 = to_double(bundle.C0);
    if (!(c0 > 0.0)) c0 = 10.0 * (gevrey::c0_norm(A, 4096) + 1.0);
    res.c0_used = c0;

    Rational decay = bundle.sigma1 - bundle.zeta * bundle.sigma;  // negative exponent
    for (std::size_t s = 0; s < deep_index; ++s) {
        const auto& cur = schedule.entries[s];
        const auto& nxt = schedule.entries[s + 1];
        std::size_t n_s = to_ulong_checked(cur.N, "N_s");
        std::size_t n_s1 = to_ulong_checked(nxt.N, "N_{s+1}");
        QTableRow row;
        row.s = s;
        row.qtilde = cur.qtilde;
        double decay_s = certify::pow_to_double(cur.qtilde, decay);
        row.lhs_Q1 = std::abs(L[n_s1] + L[n_s] - 2.0 * L[2 * n_s]);
        row.bound_Q1 = c0 * decay_s;
        row.lhs_Q2 = std::abs(L[2 * n_s1] - L[n_s1]);
        row.bound_Q2 = 2.0 * c0 * decay_s;
        row.lhs_Q3 = std::abs(L[n_s1] - L[n_s]);
        row.bound_Q3 =
            10.0 * c0 *
            (s >= 1 ? certify::pow_to_double(schedule.entries[s - 1].qtilde, decay) : 1.0);
        res.table.push_back(row);
    }
    return res;
}

std::string qtable_csv(const std::vector<QTableRow>& rows) {
    std::string out = "s,qtilde_s,lhs_Q1,bound_Q1,lhs_Q2,bound_Q2,lhs_Q3,bound_Q3\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.s, r.qtilde.get_str().c_str(), r.lhs_Q1, r.bound_Q1, r.lhs_Q2,
                      r.bound_Q2, r.lhs_Q3, r.bound_Q3);
        out += buf;
    }
    return out;
}

ContinuityProbeResult continuity_probe(const gevrey::GevreyFunction& potential,
                                       const freq::Frequency& f,
                                       const freq::Convergent& qtilde0,
                                       const std::vector<double>& E_grid,
                                       const ParameterBundle& bundle,
                                       const cocycle::QuadratureSpec& spec) {
    if (E_grid.size() < 2) throw input_error("continuity_probe: need at least 2 energies");
    if (!std::is_sorted(E_grid.begin(), E_grid.end()))
        throw input_error("continuity_probe: energy grid must be sorted");

    ContinuityProbeResult res;
    res.reference_E = E_grid[E_grid.size() / 2];

    gevrey::MatrixFunction a_ref = gevrey::MatrixFunction::schrodinger(potential,
                                                                       res.reference_E);
    InitialScaleResult init = find_initial_scale(a_ref, f, qtilde0, bundle, spec);
    if (!init.found) {
        std::ostringstream msg;
        msg << "continuity_probe: initial-scale search failed at reference E = "
            << res.reference_E << " (best ratio " << init.best_ratio << " at N = "
            << init.best_N << ")";
        throw input_error(msg.str());
    }
    res.N0 = init.N0;
    res.C_N0 = static_cast<double>(init.N0) * (1.0 + gevrey::c0_norm(a_ref, 4096));
    res.tail = 2.0 * certify::pow_to_double(qtilde0.q, -bundle.c_prime);

    for (double E : E_grid) {
        gevrey::MatrixFunction a = gevrey::MatrixFunction::schrodinger(potential, E);
        auto batch = cocycle::le_batch(a, f, {res.N0, 2 * res.N0}, spec);
        ProbePoint p;
        p.E = E;
        p.L_N0 = batch.le[0].value;
        p.L_2N0 = batch.le[1].value;
        p.extrapolant = 2.0 * p.L_2N0 - p.L_N0;
        res.points.push_back(p);
    }

    for (std::size_t i = 0; i + 1 < E_grid.size(); ++i) {
        gevrey::MatrixFunction a = gevrey::MatrixFunction::schrodinger(potential, E_grid[i]);
        gevrey::MatrixFunction b =
            gevrey::MatrixFunction::schrodinger(potential, E_grid[i + 1]);
        res.max_step_perturbation =
            std::max(res.max_step_perturbation, gevrey::c0_distance(a, b, 256));
    }

    // modulus of continuity of the extrapolant over the grid
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < E_grid.size(); ++i)
        dmin = std::min(dmin, E_grid[i + 1] - E_grid[i]);
    if (!(dmin > 0.0)) dmin = 0.0;
    double range = E_grid.back() - E_grid.front();

    struct PairGap {
        double d;
        double diff;
    };
    std::vector<PairGap> pairs;
    for (std::size_t i = 0; i < res.points.size(); ++i)
        for (std::size_t j = i + 1; j < res.points.size(); ++j)
            pairs.push_back({E_grid[j] - E_grid[i],
                             std::abs(res.points[j].extrapolant - res.points[i].extrapolant)});
    std::sort(pairs.begin(), pairs.end(),
              [](const PairGap& a, const PairGap& b) { return a.d < b.d; });

    std::size_t steps = 1;
    if (dmin > 0.0)
        steps = std::min<std::size_t>(200, static_cast<std::size_t>(range / dmin + 0.5));
    std::size_t cursor = 0;
    double running = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        double h = (dmin > 0.0) ? dmin * static_cast<double>(k) : range;
        while (cursor < pairs.size() && pairs[cursor].d <= h * (1.0 + 1e-12)) {
            running = std::max(running, pairs[cursor].diff);
            ++cursor;
        }
        ModulusRow row;
        row.h = h;
        row.modulus = running;
        row.jump_bound = res.C_N0 * h + res.tail;
        res.modulus.push_back(row);
        if (h >= range) break;
    }
    return res;
}

std::string probe_csv(const std::vector<ProbePoint>& points) {
    std::string out = "E,L_N0,L_2N0,extrapolant\n";
    char buf[256];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.E, p.L_N0, p.L_2N0,
                      p.extrapolant);
        out += buf;
    }
    return out;
}

} // namespace qpc::scheme
