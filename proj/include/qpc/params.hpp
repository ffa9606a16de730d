#pragma once

#include "qpc/bigint.hpp"

#include <string>
#include <vector>

namespace qpc::scheme {

// The full constant set. Exact rationals back every machine-checkable
// inequality; doubles are derived views for numerics and reports.
struct ParameterBundle {
    // inputs
    Rational s, eta, kappa;
    // selected parameters
    Rational delta, sigma, gamma, sigma1, zeta, c_prime;
    long p = 0;
    // existential constants (configuration or calibration)
    Rational c = Rational(1, 10);
    Rational C1 = 1, C2 = 1;
    Rational C0 = 0;  // 0 = derive as 10(||A||_C0 + 1) when a cocycle is at hand
    Rational C_ap = 10;
    Rational epsilon = Rational(1, 100);
    Bigint q0_min = 1;

    Rational zeta_sigma_minus_sigma1() const { return zeta * sigma - sigma1; }
    double c_d() const { return to_double(c); }
    double gamma_d() const { return to_double(gamma); }
};

struct SigmaSearch {
    Rational sigma_start = Rational(3, 2);
    Rational shrink = Rational(1, 2);  // sigma <- 1 + shrink (sigma - 1)
    int max_iter = 64;
};

// Names of violated inequalities, empty when the bundle is consistent.
// All checks are exact rational comparisons.
std::vector<std::string> violated_invariants(const ParameterBundle& b);

// Parameter selection: delta is the midpoint of (s-1, 1-eta); sigma shrinks
// geometrically toward 1 until (p1), (p2), (gap) hold with
// p = floor(delta sigma / (sigma - 1)) + 1; zeta is the midpoint of
// (sigma1/sigma, gamma/eta) and c' = (zeta sigma - sigma1)/2.
ParameterBundle select_parameters(const Rational& s, const Rational& eta,
                                  const Rational& kappa, const SigmaSearch& search = {});

// Re-derive zeta-dependent quantities after an override; validates.
void override_zeta(ParameterBundle& b, const Rational& zeta);

} // namespace qpc::scheme
