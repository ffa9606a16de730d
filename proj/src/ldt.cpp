#include "qpc/ldt.hpp"

#include "qpc/certify.hpp"
#include "qpc/errors.hpp"
#include "qpc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qpc::ldt {

using certify::Cmp;

std::pair<Bigint, Bigint> deviation_window(const scheme::ParameterBundle& bundle,
                                           const Bigint& q) {
    Bigint lo = certify::floor_mul_pow(bundle.C1, q, bundle.sigma, 1) + 1;
    Bigint hi = certify::floor_mul_pow(bundle.C2, q, bundle.sigma1, 1);
    if (certify::cmp_mul_pow(bundle.C2, q, bundle.sigma1, Rational(hi)) == Cmp::equal)
        hi -= 1;  // the window is open: N < C2 q^sigma1
    return {lo, hi};
}

std::optional<std::size_t> find_window(const std::vector<freq::Convergent>& convs,
                                       const scheme::ParameterBundle& bundle,
                                       std::size_t N) {
    Rational n_rat(static_cast<unsigned long>(N));
    for (std::size_t j = convs.size(); j-- > 1;) {
        const Bigint& q = convs[j].q;
        // q^sigma >= q, so C1 q >= N already puts N at or below the window
        if (bundle.C1 * Rational(q) >= n_rat) continue;
        if (certify::cmp_mul_pow(bundle.C1, q, bundle.sigma, n_rat) == Cmp::less &&
            certify::cmp_mul_pow(bundle.C2, q, bundle.sigma1, n_rat) == Cmp::greater)
            return j;
    }
    return std::nullopt;
}

DeviationReport deviation_measure(const gevrey::MatrixFunction& A,
                                  const freq::Frequency& f, std::size_t N, double kappa,
                                  const scheme::ParameterBundle& bundle,
                                  const cocycle::QuadratureSpec& spec,
                                  bool waive_window) {
    if (!(kappa > 0.0)) throw input_error("deviation_measure: need kappa > 0");

    DeviationReport rep;
    rep.N = N;
    rep.kappa = kappa;
    rep.K = spec.K;
    rep.window_waived = waive_window;

    auto convs = scheme::all_convergents(f);
    auto j = find_window(convs, bundle, N);
    if (j) {
        rep.q = convs[*j].q;
        rep.below_q0_min = rep.q < bundle.q0_min;
    } else if (!waive_window) {
        // report the nearest admissible ranges around N
        std::ostringstream msg;
        msg << "deviation_measure: no convergent window contains N = " << N
            << "; nearest admissible ranges:";
        int shown = 0;
        for (std::size_t i = 1; i < convs.size() && shown < 3; ++i) {
            auto [lo, hi] = deviation_window(bundle, convs[i].q);
            if (hi < lo) continue;
            if (hi < 1 || lo > Bigint(static_cast<unsigned long>(N)) * 16) continue;
            msg << " q=" << convs[i].q.get_str() << " -> [" << lo.get_str() << ", "
                << hi.get_str() << "]";
            ++shown;
        }
        throw input_error(msg.str());
    }

    auto batch = cocycle::le_batch(A, f, {N}, spec);
    rep.L_N = batch.le[0].value;
    const auto& u = batch.u[0];
    std::size_t over = 0;
    for (double ui : u)
        if (std::abs(ui - rep.L_N) > kappa) ++over;
    rep.measured_fraction = static_cast<double>(over) / static_cast<double>(spec.K);

    if (rep.q > 0) {
        double qg = certify::pow_to_double(rep.q, bundle.gamma);
        rep.bound = std::max(std::exp(-bundle.c_d() * qg),
                             std::numeric_limits<double>::denorm_min());
    }
    return rep;
}

LdtCalibration fit_ldt_constant(const std::vector<DeviationSample>& samples, double gamma,
                                std::size_t K) {
    LdtCalibration cal;
    cal.gamma = gamma;
    cal.floor_c_max = std::numeric_limits<double>::infinity();

    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : samples) {
        double x = certify::pow_to_double(s.q, rational_from_double(gamma));
        if (s.fraction > 0.0) {
            double y = -std::log(s.fraction);
            sxx += x * x;
            sxy += x * y;
            cal.points.push_back({s.q, s.N, s.fraction, y, 0.0});
        } else {
            double cmax = std::log(static_cast<double>(K)) / x;
            cal.floor_c_max = std::min(cal.floor_c_max, cmax);
            cal.floor_rows.push_back({s.q, s.N, 0.0, 0.0, 0.0});
        }
    }
    if (!cal.points.empty() && sxx > 0.0) {
        cal.c = sxy / sxx;
        cal.fit_succeeded = cal.c > 0.0;
        double rss = 0.0;
        for (auto& p : cal.points) {
            double x = certify::pow_to_double(p.q, rational_from_double(gamma));
            p.fitted_bound = std::exp(-cal.c * x);
            double r = p.neg_log_fraction - cal.c * x;
            rss += r * r;
        }
        cal.residual_norm = std::sqrt(rss);
    }
    for (auto& p : cal.floor_rows) {
        double x = certify::pow_to_double(p.q, rational_from_double(gamma));
        p.fitted_bound = cal.fit_succeeded ? std::exp(-cal.c * x) : 1.0;
    }
    return cal;
}

LdtCalibration calibrate_ldt(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                             const std::vector<freq::Convergent>& q_list, double kappa,
                             const scheme::ParameterBundle& bundle,
                             const cocycle::QuadratureSpec& spec) {
    if (q_list.size() < 3) throw input_error("calibrate_ldt: need at least 3 windows");
    std::vector<DeviationSample> samples;
    for (const auto& conv : q_list) {
        auto [lo, hi] = deviation_window(bundle, conv.q);
        if (hi < lo) {
            std::ostringstream msg;
            msg << "calibrate_ldt: empty window at q = " << conv.q.get_str();
            throw input_error(msg.str());
        }
        Bigint mid = fdiv(lo + hi, Bigint(2));
        if (!mid.fits_ulong_p())
            throw input_error("calibrate_ldt: window midpoint exceeds the compute range");
        std::size_t N = mid.get_ui();
        DeviationReport rep = deviation_measure(A, f, N, kappa, bundle, spec, true);
        samples.push_back({conv.q, N, rep.measured_fraction});
    }
    return fit_ldt_constant(samples, to_double(bundle.gamma), spec.K);
}

std::string calibration_csv(const LdtCalibration& cal) {
    std::string out = "q,N,fraction,neg_log_fraction,fitted_bound\n";
    char buf[256];
    auto emit = [&](const CalibrationPoint& p) {
        std::snprintf(buf, sizeof(buf), "%s,%zu,%.17g,%.17g,%.17g\n", p.q.get_str().c_str(),
                      p.N, p.fraction, p.neg_log_fraction, p.fitted_bound);
        out += buf;
    };
    for (const auto& p : cal.points) emit(p);
    for (const auto& p : cal.floor_rows) emit(p);
    return out;
}

} // namespace qpc::ldt
