#include "qpc/params.hpp"

#include "qpc/errors.hpp"

#include <sstream>

namespace qpc::scheme {

namespace {

Rational rational_floor_plus_one(const Rational& x) {
    Bigint f = fdiv(x.get_num(), x.get_den());
    return Rational(f + 1);
}

} // namespace

std::vector<std::string> violated_invariants(const ParameterBundle& b) {
    std::vector<std::string> out;
    auto fail = [&out](const char* name) { out.push_back(name); };

    if (!(b.s > 1 && b.s < 2)) fail("1 < s < 2");
    if (!(b.eta > 0 && b.eta < 2 - b.s)) fail("0 < eta < 2 - s");
    if (!(b.kappa > 0)) fail("kappa > 0");
    if (!(b.delta > b.s - 1 && b.delta < 1 - b.eta)) fail("s - 1 < delta < 1 - eta");
    if (!(b.sigma > 1 && b.sigma * b.delta < 1)) fail("(p1) 1 < sigma < 1/delta");
    Rational p(b.p);
    if (!(b.delta * b.sigma < p * (b.sigma - 1) && p * (b.sigma - 1) < 1))
        fail("(p1) delta sigma/(sigma-1) < p < 1/(sigma-1)");
    if (!(b.gamma == 1 + p * (1 - b.sigma))) fail("(p2) gamma = 1 + p(1-sigma)");
    if (!(b.sigma1 * b.delta == p * (b.sigma - 1))) fail("(p2) sigma1 = p(sigma-1)/delta");
    if (!(b.eta * b.sigma1 < b.gamma * b.sigma)) fail("(gap) eta sigma1 < gamma sigma");
    if (!(b.sigma1 < b.zeta * b.sigma && b.zeta * b.eta < b.gamma))
        fail("(zeta) sigma1/sigma < zeta < gamma/eta");
    if (!(2 * b.c_prime == b.zeta * b.sigma - b.sigma1 && b.c_prime > 0))
        fail("c' = (zeta sigma - sigma1)/2 > 0");
    if (!(b.c > 0)) fail("c > 0");
    if (!(b.C1 > 0 && b.C2 > 0)) fail("C1, C2 > 0");
    if (!(b.C0 >= 0)) fail("C0 >= 0");
    if (!(b.C_ap > 0)) fail("C_AP > 0");
    if (!(b.epsilon > 0 && b.epsilon < 1)) fail("0 < epsilon < 1");
    if (!(b.q0_min >= 1)) fail("q0_min >= 1");
    return out;
}

ParameterBundle select_parameters(const Rational& s, const Rational& eta,
                                  const Rational& kappa, const SigmaSearch& search) {
    if (!(s > 1 && s < 2)) throw input_error("select_parameters: need 1 < s < 2");
    if (!(eta > 0 && eta < 2 - s))
        throw input_error("select_parameters: infeasible, the hypothesis requires "
                          "0 < eta < 2 - s");
    if (!(kappa > 0)) throw input_error("select_parameters: need kappa > 0");
    if (!(search.sigma_start > 1)) throw input_error("select_parameters: sigma_start > 1");
    if (!(search.shrink > 0 && search.shrink < 1))
        throw input_error("select_parameters: shrink in (0,1)");

    ParameterBundle b;
    b.s = s;
    b.eta = eta;
    b.kappa = kappa;
    b.delta = (s - 1 + 1 - eta) / 2;

    Rational sigma = search.sigma_start;
    std::string last_violation = "none";
    for (int iter = 0; iter < search.max_iter; ++iter) {
        if (!(sigma * b.delta < 1)) {
            last_violation = "(p1) 1 < sigma < 1/delta";
        } else {
            Rational p_rat = rational_floor_plus_one(b.delta * sigma / (sigma - 1));
            if (!(p_rat * (sigma - 1) < 1)) {
                last_violation = "(p1) p < 1/(sigma-1)";
            } else {
                Rational gamma = 1 + p_rat * (1 - sigma);
                Rational sigma1 = p_rat * (sigma - 1) / b.delta;
                if (!(eta * sigma1 < gamma * sigma)) {
                    last_violation = "(gap) eta sigma1 < gamma sigma";
                } else {
                    b.sigma = sigma;
                    b.p = static_cast<long>(p_rat.get_num().get_si());
                    b.gamma = gamma;
                    b.sigma1 = sigma1;
                    b.zeta = (sigma1 / sigma + gamma / eta) / 2;
                    b.c_prime = (b.zeta * sigma - sigma1) / 2;
                    auto bad = violated_invariants(b);
                    if (!bad.empty())
                        throw numeric_error("select_parameters: internal check failed: " +
                                            bad.front());
                    return b;
                }
            }
        }
        sigma = 1 + search.shrink * (sigma - 1);
    }
    std::ostringstream msg;
    msg << "select_parameters: sigma search exhausted after " << search.max_iter
        << " iterations; last violated: " << last_violation;
    throw input_error(msg.str());
}

void override_zeta(ParameterBundle& b, const Rational& zeta) {
    b.zeta = zeta;
    b.c_prime = (zeta * b.sigma - b.sigma1) / 2;
    auto bad = violated_invariants(b);
    if (!bad.empty())
        throw input_error("zeta override violates: " + bad.front());
}

} // namespace qpc::scheme
