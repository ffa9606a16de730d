#include "qpc/schedule.hpp"

#include "qpc/certify.hpp"
#include "qpc/errors.hpp"

#include <doctest.h>

using namespace qpc;
using namespace qpc::scheme;

namespace {

ParameterBundle worked_bundle() {
    SigmaSearch search;
    search.sigma_start = rational_from_decimal("1.05");
    ParameterBundle b = select_parameters(rational_from_decimal("1.4"),
                                          rational_from_decimal("0.3"),
                                          rational_from_decimal("0.005"), search);
    override_zeta(b, Rational(6, 5));
    return b;
}

} // namespace

TEST_CASE("qtilde selection walks 34 -> 89 -> 233 on the golden mean at zeta = 1.2") {
    auto f = freq::Frequency::golden(256);
    auto convs = all_convergents(f);
    REQUIRE(convs[8].q == 34);

    Rational zeta(6, 5);
    std::size_t j1 = next_qtilde_index(convs, 8, convs[8].q, zeta);
    CHECK(convs[j1].q == 89);
    std::size_t j2 = next_qtilde_index(convs, j1, convs[j1].q, zeta);
    CHECK(convs[j2].q == 233);
}

TEST_CASE("qtilde selection is strict at exact-power ties") {
    // 32^(6/5) = 64 exactly; the smallest q_j > 64 must skip 64 itself
    std::vector<freq::Convergent> convs;
    convs.push_back({0, Bigint(0), Bigint(1)});
    convs.push_back({1, Bigint(1), Bigint(32)});
    convs.push_back({2, Bigint(1), Bigint(64)});
    convs.push_back({3, Bigint(2), Bigint(65)});
    std::size_t j = next_qtilde_index(convs, 1, convs[1].q, Rational(6, 5));
    CHECK(convs[j].q == 65);
}

TEST_CASE("depth-0 schedule carries just the window certificate") {
    auto f = freq::Frequency::golden(256);
    ParameterBundle b = worked_bundle();
    b.C1 = Rational(1, 4);
    b.C2 = 8;
    auto convs = all_convergents(f);
    // q = 34 at index 8; window (0.25*34^1.05, 8*34^(12/11)) contains 50
    ScaleSchedule s = build_schedule(convs, b, 8, 0, Bigint(50), true, f.label());
    REQUIRE(s.entries.size() == 1);
    CHECK(s.entries[0].qtilde == 34);
    CHECK(s.entries[0].N == 50);
    CHECK(s.entries[0].cert_Ns);
    CHECK(s.feasible);
}

TEST_CASE("desk-scale schedules record failed window certificates") {
    auto f = freq::Frequency::golden(256);
    ParameterBundle b = worked_bundle();  // C1 = C2 = 1: desk windows are empty
    auto convs = all_convergents(f);
    Bigint n0 = window_floor_n0(b, convs[8].q);
    ScaleSchedule rep = build_schedule(convs, b, 8, 2, n0, false, f.label());
    CHECK(rep.entries.size() == 3);
    CHECK_FALSE(rep.feasible);
    CHECK_FALSE(rep.entries[0].cert_Ns);
    CHECK(rep.entries[0].violation.find("(Ns)") != std::string::npos);
    // construction still follows the selection and ratio rules
    CHECK(rep.entries[1].qtilde == 89);
    CHECK(rep.entries[2].qtilde == 233);
    CHECK(rep.entries[1].N == rep.entries[1].m * rep.entries[0].N);

    ScaleSchedule strict = build_schedule(convs, b, 8, 2, n0, true, f.label());
    CHECK(strict.entries.size() == 1);
    CHECK_FALSE(strict.feasible);
}

TEST_CASE("the m ratio follows the floor formula") {
    auto f = freq::Frequency::golden(256);
    ParameterBundle b = worked_bundle();
    b.C1 = Rational(1, 4);
    b.C2 = 8;
    auto convs = all_convergents(f);
    ScaleSchedule s = build_schedule(convs, b, 8, 2, Bigint(20), false, f.label());
    // m_1 = floor((C1+C2) * 89^(21/20) / 20) + 1
    Bigint expect = certify::floor_mul_pow(b.C1 + b.C2, Bigint(89), b.sigma, Bigint(20)) + 1;
    CHECK(s.entries[1].m == expect);
    CHECK(s.entries[1].N == expect * 20);
}

TEST_CASE("smallest certifying q0 exists on the golden mean with default constants") {
    auto f = freq::Frequency::golden(1024);
    ParameterBundle b = worked_bundle();  // C1 = C2 = 1, c = 1/10, zeta = 6/5
    auto convs = all_convergents(f);
    auto found = smallest_certifying_q0(convs, b, 4, f.label());
    REQUIRE(found.has_value());
    CHECK(found->feasible);
    CHECK(found->entries.size() == 5);
    for (const auto& e : found->entries) {
        CHECK(e.cert_qs);
        CHECK(e.cert_Ns);
        CHECK(e.cert_ms);
    }
    // the paper regime is asymptotic: desk-scale q0 cannot certify
    CHECK(found->entries[0].qtilde > Bigint("1000000000000"));
    // minimality: the previous convergent fails
    std::size_t j = found->entries[0].conv_index;
    Bigint n0_prev = window_floor_n0(b, convs[j - 1].q);
    ScaleSchedule prev = build_schedule(convs, b, j - 1, 4, n0_prev, true, f.label());
    CHECK_FALSE(prev.feasible);
}

TEST_CASE("smallest certifying q0 exists for a constructed Omega(1/2) stream") {
    auto f = freq::Frequency::omega_eta(0.5, 1.0, 400, 7, 1024);
    SigmaSearch search;  // default start 1.5 shrinks to 1 + 2^-5 for eta = 1/2
    ParameterBundle b = select_parameters(rational_from_decimal("1.4"),
                                          rational_from_decimal("0.5"),
                                          rational_from_decimal("0.005"), search);
    CHECK(b.sigma == Rational(33, 32));
    auto convs = all_convergents(f);
    auto found = smallest_certifying_q0(convs, b, 4, f.label());
    REQUIRE(found.has_value());
    CHECK(found->feasible);
    CHECK(found->entries.size() == 5);
    for (const auto& e : found->entries) {
        CHECK(e.cert_qs);
        CHECK(e.cert_Ns);
        CHECK(e.cert_ms);
    }
}

TEST_CASE("stream exhaustion surfaces as an input error") {
    auto f = freq::Frequency::golden(24);
    ParameterBundle b = worked_bundle();
    auto convs = all_convergents(f);
    // selection from the last convergent has nowhere to go
    CHECK_THROWS_AS(
        next_qtilde_index(convs, convs.size() - 1, convs.back().q, b.zeta),
        input_error);
}
