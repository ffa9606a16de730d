#pragma once

#include "qpc/cocycle.hpp"
#include "qpc/freq.hpp"
#include "qpc/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpc::ldt {

struct DeviationReport {
    std::size_t N = 0;
    Bigint q;                    // denominator in force (0 when waived with no window)
    double kappa = 0.0;
    double measured_fraction = 0.0;
    double bound = 1.0;          // exp(-c q^gamma) under the bundle's (c, gamma)
    std::size_t K = 0;
    double L_N = 0.0;
    bool window_waived = false;
    bool below_q0_min = false;
};

// Integer bounds [lo, hi] of the admissible window C1 q^sigma < N < C2 q^sigma1
// (empty when hi < lo).
std::pair<Bigint, Bigint> deviation_window(const scheme::ParameterBundle& bundle,
                                           const Bigint& q);

// Largest convergent whose window contains N.
std::optional<std::size_t> find_window(const std::vector<freq::Convergent>& convs,
                                       const scheme::ParameterBundle& bundle,
                                       std::size_t N);

// Fraction of grid points where |u_N(theta) - L_N| > kappa, with L_N computed
// on the same grid. Without a waiver, N must sit in some convergent's window.
DeviationReport deviation_measure(const gevrey::MatrixFunction& A,
                                  const freq::Frequency& f, std::size_t N, double kappa,
                                  const scheme::ParameterBundle& bundle,
                                  const cocycle::QuadratureSpec& spec,
                                  bool waive_window = false);

struct DeviationSample {
    Bigint q;
    std::size_t N = 0;
    double fraction = 0.0;
};

struct CalibrationPoint {
    Bigint q;
    std::size_t N = 0;
    double fraction = 0.0;
    double neg_log_fraction = 0.0;
    double fitted_bound = 0.0;
};

struct LdtCalibration {
    double c = 0.0;
    bool fit_succeeded = false;  // false = degenerate (all fractions zero)
    double gamma = 0.0;
    std::vector<CalibrationPoint> points;      // fraction > 0, used in the fit
    std::vector<CalibrationPoint> floor_rows;  // fraction = 0: constraint c q^gamma <= ln K
    double residual_norm = 0.0;
    double floor_c_max = 0.0;  // min over floor rows of ln(K) / q^gamma
};

// Least squares for c with gamma fixed, on -ln(fraction) = c q^gamma over
// samples with fraction > 0. Zero-fraction samples become resolution-floor
// constraints.
LdtCalibration fit_ldt_constant(const std::vector<DeviationSample>& samples, double gamma,
                                std::size_t K);

// Measures a deviation fraction at the (rounded) midpoint of each q's window
// and fits c. Requires at least 3 windows.
LdtCalibration calibrate_ldt(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                             const std::vector<freq::Convergent>& q_list, double kappa,
                             const scheme::ParameterBundle& bundle,
                             const cocycle::QuadratureSpec& spec);

// CSV columns: q, N, fraction, neg_log_fraction, fitted_bound.
std::string calibration_csv(const LdtCalibration& cal);

} // namespace qpc::ldt
