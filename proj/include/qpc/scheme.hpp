#pragma once

#include "qpc/cocycle.hpp"
#include "qpc/freq.hpp"
#include "qpc/mat2.hpp"
#include "qpc/params.hpp"
#include "qpc/schedule.hpp"

#include <string>
#include <vector>

namespace qpc::scheme {

struct InitialScaleResult {
    bool found = false;
    std::size_t N0 = 0;
    double L_N0 = 0.0;
    double L_2N0 = 0.0;
    // when the search fails: best ratio L_2N/L_N seen and where
    double best_ratio = 0.0;
    std::size_t best_N = 0;
    Bigint window_lo, window_hi;  // integer bounds of (C1 q^sigma, C2 q^sigma1 / 2)
};

// Smallest N0 in the window with L_{2 N0} > (99/100) L_{N0}: geometric mesh
// of ratio 1.1, then bisection down to the smallest passing integer.
// Preconditions: window nonempty; L_N > 100 kappa at the window's left edge.
InitialScaleResult find_initial_scale(const gevrey::MatrixFunction& A,
                                      const freq::Frequency& f,
                                      const freq::Convergent& qtilde0,
                                      const ParameterBundle& bundle,
                                      const cocycle::QuadratureSpec& spec);

struct ApReport {
    std::size_t n = 0;
    double mu = 0.0;
    double c_ap = 0.0;
    bool mu_exceeds_n = false;
    std::vector<std::size_t> norm_violations;  // indices with ||M_j|| < mu
    std::vector<std::size_t> pair_violations;  // pair defect >= ln(mu)/2
    bool hypotheses_hold = false;
    double lhs = 0.0;    // |ln||prod|| + sum_{j=2}^{n-1} ln||M_j|| - sum ln||M_{j+1}M_j|||
    double ratio = 0.0;  // lhs * mu / n
    bool conclusion_holds = false;  // lhs < c_ap * n / mu
};

// Pure report: hypotheses are checked pointwise, nothing is asserted. The
// lhs is assembled from log-norm terms and summed exactly, so telescoping
// fixtures cancel to exactly zero.
ApReport avalanche_check(const std::vector<Mat2>& ms, double mu, double c_ap);

struct TwoScaleEstimate {
    std::size_t N = 0, Nprime = 0, m = 0;
    Bigint q;
    double L_N = 0.0, L_2N = 0.0, L_Nprime = 0.0;
    double defect = 0.0;  // |L_N' + L_N - 2 L_2N|
    double bound = 0.0;   // exp(-(c/2) q^gamma) + 2 L_N / m
    bool flag_LN_gt_90kappa = false;
    bool flag_L2N_ratio = false;      // L_2N > (9/10) L_N
    bool flag_m_window = false;       // m < exp((c/10) q^gamma), certified
    bool flag_m_window_vacuous = false;  // exp((c/10) q^gamma) <= 2: no m >= 2 fits
    bool flag_window = false;         // C1 q^sigma < N < 2N < C2 q^sigma1
    bool flag_q_ge_q0min = false;
};

// Computes L_N, L_2N, L_{mN} on a shared grid plus the two-scale defect and
// hypothesis flags (recorded, never enforced).
TwoScaleEstimate two_scale_defect(const gevrey::MatrixFunction& A,
                                  const freq::Frequency& f, std::size_t N, std::size_t m,
                                  const freq::Convergent& q, const ParameterBundle& bundle,
                                  const cocycle::QuadratureSpec& spec);

struct QTableRow {
    std::size_t s = 0;
    Bigint qtilde;
    double lhs_Q1 = 0.0, bound_Q1 = 0.0;
    double lhs_Q2 = 0.0, bound_Q2 = 0.0;
    double lhs_Q3 = 0.0, bound_Q3 = 0.0;
};

struct ExtrapolationResult {
    std::size_t deep_index = 0;
    std::size_t N0 = 0, N_deep = 0;
    double L_N0 = 0.0, L_2N0 = 0.0, L_Ndeep = 0.0;
    double error = 0.0;  // |L_{N_deep} + L_{N0} - 2 L_{2N0}|, L_{N_deep} proxies L
    std::vector<QTableRow> table;  // per-step quantities for s < deep_index
    double c_prime = 0.0;
    double rate_reference = 0.0;  // qtilde0^(-c')
    double c0_used = 0.0;
};

// The deep finite scale L_{N_deep} stands in for the limit; the result is
// labeled as a proxy in all outputs.
ExtrapolationResult extrapolation_error(const gevrey::MatrixFunction& A,
                                        const freq::Frequency& f,
                                        const ScaleSchedule& schedule,
                                        std::size_t deep_index,
                                        const ParameterBundle& bundle,
                                        const cocycle::QuadratureSpec& spec,
                                        std::size_t budget);

// CSV columns: s, qtilde_s, lhs_Q1, bound_Q1, lhs_Q2, bound_Q2, lhs_Q3, bound_Q3.
std::string qtable_csv(const std::vector<QTableRow>& rows);

struct ProbePoint {
    double E = 0.0;
    double L_N0 = 0.0;
    double L_2N0 = 0.0;
    double extrapolant = 0.0;  // 2 L_2N0 - L_N0
};

struct ModulusRow {
    double h = 0.0;
    double modulus = 0.0;     // max |extrapolant(E) - extrapolant(E')| over |E-E'| <= h
    double jump_bound = 0.0;  // C(N0) h + 2 qtilde0^(-c')
};

struct ContinuityProbeResult {
    std::size_t N0 = 0;
    double C_N0 = 0.0;  // N0 (1 + max-grid ||A_ref||)
    double tail = 0.0;  // 2 qtilde0^(-c')
    double reference_E = 0.0;
    double max_step_perturbation = 0.0;  // max C0 distance of consecutive A_E
    std::vector<ProbePoint> points;
    std::vector<ModulusRow> modulus;
};

// Energy sweep of the Schrodinger extrapolant at the N0 found for the grid's
// reference (median) energy.
ContinuityProbeResult continuity_probe(const gevrey::GevreyFunction& potential,
                                       const freq::Frequency& f,
                                       const freq::Convergent& qtilde0,
                                       const std::vector<double>& E_grid,
                                       const ParameterBundle& bundle,
                                       const cocycle::QuadratureSpec& spec);

// CSV columns: E, L_N0, L_2N0, extrapolant.
std::string probe_csv(const std::vector<ProbePoint>& points);

} // namespace qpc::scheme
