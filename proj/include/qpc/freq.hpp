#pragma once

#include "qpc/bigint.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpc::freq {

// An irrational alpha in (0,1) given by its continued fraction coefficients
// a_1, a_2, ...  The stream is materialized at construction (immutable, safe
// to share). A plain finite list is exhaustible; presets and generators carry
// a generation horizon.
class Frequency {
public:
    // Explicit list. period > 0 repeats the trailing `period` coefficients
    // up to `horizon` entries; period == 0 leaves the stream exhaustible.
    static Frequency from_coeffs(std::vector<Bigint> coeffs, std::size_t period,
                                 std::string label, std::size_t horizon = 4096);
    static Frequency golden(std::size_t horizon = 4096);  // all a_n = 1
    static Frequency silver(std::size_t horizon = 4096);  // all a_n = 2

    // Near-extremal member of the class ln q_{n+1} <= C_alpha q_n^eta.
    // The bound holds at every pair index n >= 1 up to the stream horizon;
    // equality is approached within factor 2 on the designated indices.
    static Frequency omega_eta(double eta, double c_alpha, std::size_t depth,
                               std::uint64_t seed, std::size_t horizon = 0);

    // a_n, n >= 1. Throws input_error when the stream is exhausted.
    const Bigint& coeff(std::size_t n) const;

    std::size_t available() const { return coeffs_.size(); }
    bool exhaustible() const { return exhaustible_; }
    const std::string& label() const { return label_; }

    // Pair indices where the omega-eta generator took an extremal step.
    const std::vector<std::size_t>& designated_indices() const { return designated_; }

private:
    Frequency() = default;
    std::vector<Bigint> coeffs_;   // coeffs_[i] = a_{i+1}
    bool exhaustible_ = false;
    std::string label_;
    std::vector<std::size_t> designated_;
};

struct Convergent {
    std::size_t n = 0;
    Bigint p, q;
};

// First `count` convergents p_0/q_0 ... p_{count-1}/q_{count-1} under the
// seeds p_0 = 0, q_0 = 1, p_1 = 1, q_1 = a_1 and the recurrence
// x_{n+1} = a_{n+1} x_n + x_{n-1}.
std::vector<Convergent> cf_convergents(const Frequency& f, std::size_t count);

// One entry of a frequency-class report. The defining inequality is checked
// over pair indices 1 <= n <= n_max (the seed pair q_0 = 1 is excluded);
// `witness` is the minimal constant over those pairs and `worst_index` the
// pair attaining it.
struct ClassEntry {
    std::size_t n_max = 0;
    double witness = 0.0;
    std::size_t worst_index = 0;
    double worst_ratio = 0.0;
};

struct FrequencyClassReport {
    double eta = 0.0;
    double tau = 0.0;
    ClassEntry bounded;   // q_{n+1} <= C q_n
    ClassEntry sdc;       // q_{n+1} <= C q_n (ln q_n)^tau, over pairs with q_n >= 2
    ClassEntry dc;        // q_{n+1} <= C q_n^tau
    ClassEntry omega;     // ln q_{n+1} <= C q_n^eta
    ClassEntry brjuno;    // witness = partial sum of (ln q_{n+1})/q_n
};

FrequencyClassReport classify_frequency(const std::vector<Convergent>& convs,
                                        double eta, double tau);

// Exact dyadic angle value = numerator / 2^bits in [0,1).
struct FixedPointAngle {
    Bigint numerator;
    unsigned bits = 0;

    double to_double() const;  // truncated to the top 53 bits
};

FixedPointAngle make_angle(const Bigint& numerator, unsigned bits);

// alpha rounded to the nearest multiple of 2^-bits, derived from the first
// convergent with q > 2^bits. Total error < 2^-bits.
FixedPointAngle alpha_fixed_point(const Frequency& f, unsigned bits);

// theta_j = theta0 + j*alpha mod 1 for j = 0..N-1 by exact integer addition.
// Requires bits >= ceil(log2 N) + 64.
std::vector<FixedPointAngle> orbit_angles(const Frequency& f, const FixedPointAngle& theta0,
                                          std::size_t N, unsigned bits);

} // namespace qpc::freq
