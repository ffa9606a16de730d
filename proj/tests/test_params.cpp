#include "qpc/params.hpp"

#include "qpc/errors.hpp"

#include <doctest.h>

using namespace qpc;
using namespace qpc::scheme;

TEST_CASE("parameter selection reproduces the worked constants at sigma = 1.05") {
    SigmaSearch search;
    search.sigma_start = rational_from_decimal("1.05");
    ParameterBundle b = select_parameters(rational_from_decimal("1.4"),
                                          rational_from_decimal("0.3"),
                                          rational_from_decimal("0.005"), search);
    CHECK(b.delta == rational_from_decimal("0.55"));
    CHECK(b.sigma == Rational(21, 20));
    CHECK(b.p == 12);
    CHECK(b.gamma == Rational(2, 5));
    CHECK(b.sigma1 == Rational(12, 11));
    // eta sigma1 = 18/55 < gamma sigma = 21/50
    CHECK(b.eta * b.sigma1 == Rational(18, 55));
    CHECK(b.gamma * b.sigma == Rational(21, 50));
    // zeta interval (80/77, 4/3), midpoint 274/231
    CHECK(b.sigma1 / b.sigma == Rational(80, 77));
    CHECK(b.gamma / b.eta == Rational(4, 3));
    CHECK(b.zeta == Rational(274, 231));
    CHECK(b.c_prime == Rational(17, 220));
    CHECK(violated_invariants(b).empty());
}

TEST_CASE("parameter selection at s = 1.1, eta = 0.1") {
    SigmaSearch search;
    search.sigma_start = rational_from_decimal("1.05");
    ParameterBundle b = select_parameters(rational_from_decimal("1.1"),
                                          rational_from_decimal("0.1"),
                                          rational_from_decimal("0.001"), search);
    CHECK(b.delta == Rational(1, 2));
    CHECK(b.p == 11);
    CHECK(b.gamma == Rational(9, 20));
    CHECK(b.sigma1 == Rational(11, 10));
    CHECK(b.eta * b.sigma1 == Rational(11, 100));
    CHECK(b.gamma * b.sigma == Rational(189, 400));
    CHECK(violated_invariants(b).empty());
}

TEST_CASE("default sigma search shrinks until the gap inequality holds") {
    // from 1.5: p < 1/(sigma-1) fails, then (gap) fails at 1.25, 1.125 works
    ParameterBundle b = select_parameters(rational_from_decimal("1.4"),
                                          rational_from_decimal("0.3"),
                                          rational_from_decimal("0.005"));
    CHECK(b.sigma == Rational(9, 8));
    CHECK(b.p == 5);
    CHECK(b.gamma == Rational(3, 8));
    CHECK(b.sigma1 == Rational(25, 22));
    CHECK(violated_invariants(b).empty());
}

TEST_CASE("infeasible hypothesis is rejected with the cited inequality") {
    CHECK_THROWS_WITH_AS(select_parameters(rational_from_decimal("1.5"),
                                           rational_from_decimal("0.6"),
                                           rational_from_decimal("0.005")),
                         doctest::Contains("0 < eta < 2 - s"), input_error);
    CHECK_THROWS_AS(select_parameters(rational_from_decimal("2.5"),
                                      rational_from_decimal("0.1"),
                                      rational_from_decimal("0.005")),
                    input_error);
}

TEST_CASE("a feasibility grid of (s, eta) pairs always selects a consistent bundle") {
    const char* ss[] = {"1.05", "1.2", "1.4", "1.6", "1.8"};
    const char* etas[] = {"0.05", "0.1", "0.15", "0.19"};
    for (const char* s : ss)
        for (const char* eta : etas) {
            ParameterBundle b = select_parameters(rational_from_decimal(s),
                                                  rational_from_decimal(eta),
                                                  rational_from_decimal("0.01"));
            CHECK(violated_invariants(b).empty());
        }
}

TEST_CASE("zeta override revalidates") {
    SigmaSearch search;
    search.sigma_start = rational_from_decimal("1.05");
    ParameterBundle b = select_parameters(rational_from_decimal("1.4"),
                                          rational_from_decimal("0.3"),
                                          rational_from_decimal("0.005"), search);
    override_zeta(b, Rational(6, 5));  // inside (80/77, 4/3)
    CHECK(violated_invariants(b).empty());
    CHECK(b.c_prime == (Rational(6, 5) * Rational(21, 20) - Rational(12, 11)) / 2);
    CHECK_THROWS_AS(override_zeta(b, Rational(2)), input_error);
}

TEST_CASE("sigma search exhaustion names the last violated inequality") {
    SigmaSearch search;
    search.max_iter = 2;  // cannot reach the feasible region from 1.5
    CHECK_THROWS_WITH_AS(select_parameters(rational_from_decimal("1.4"),
                                           rational_from_decimal("0.3"),
                                           rational_from_decimal("0.005"), search),
                         doctest::Contains("last violated"), input_error);
}
