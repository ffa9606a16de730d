#pragma once

#include "qpc/freq.hpp"
#include "qpc/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpc::scheme {

struct ScheduleEntry {
    std::size_t s_index = 0;
    std::size_t conv_index = 0;  // j with q_j = qtilde_s
    Bigint qtilde;
    Bigint N;
    Bigint m;  // N_s = m_s N_{s-1}; m_0 = 1
    bool cert_qs = false;
    bool cert_Ns = false;
    bool cert_ms = false;
    std::string violation;  // first violated inequality when a certificate fails
};

struct ScaleSchedule {
    std::vector<ScheduleEntry> entries;
    bool feasible = false;  // all certificates hold
    std::string freq_label;
};

// Every convergent the stream can produce.
std::vector<freq::Convergent> all_convergents(const freq::Frequency& f);

// Smallest convergent with q > qtilde^zeta, scanning upward from
// start_index + 1. Throws input_error when the stream runs out first.
std::size_t next_qtilde_index(const std::vector<freq::Convergent>& convs,
                              std::size_t start_index, const Bigint& qtilde,
                              const Rational& zeta);

// Iterates the multi-scale construction from q_{q0_index} with the given N_0:
//   qtilde_{s+1} = smallest q_j > qtilde_s^zeta
//   m_{s+1} = floor((C1 + C2) qtilde_{s+1}^sigma / N_s) + 1, N_{s+1} = m_{s+1} N_s
// and certifies the three inequality families per entry. In strict mode the
// construction stops at the first failed certificate; otherwise certificates
// are recorded and construction continues.
ScaleSchedule build_schedule(const std::vector<freq::Convergent>& convs,
                             const ParameterBundle& bundle, std::size_t q0_index,
                             std::size_t depth, const Bigint& N0, bool strict,
                             std::string freq_label);

// Convenience overload that materializes the stream's convergents.
ScaleSchedule build_schedule(const freq::Frequency& f, const ParameterBundle& bundle,
                             std::size_t q0_index, std::size_t depth, const Bigint& N0,
                             bool strict);

// Arithmetic choice of N_0 used by the certifier: floor(C1 qtilde0^sigma) + 1.
Bigint window_floor_n0(const ParameterBundle& bundle, const Bigint& qtilde0);

// Smallest q0 (by convergent index) from which a strict depth-`depth`
// schedule certifies, with the arithmetic N_0 above.
std::optional<ScaleSchedule> smallest_certifying_q0(
    const std::vector<freq::Convergent>& convs, const ParameterBundle& bundle,
    std::size_t depth, std::string freq_label);

} // namespace qpc::scheme
