#include "qpc/gevrey.hpp"

#include "qpc/detail/splitmix.hpp"
#include "qpc/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qpc;
using namespace qpc::gevrey;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("gevrey norm of simple functions") {
    GevreyFunction z = GevreyFunction::zero(1.5, 0.2);
    CHECK(gevrey_norm(z) == 0.0);

    // cos has coefficients 1/2 at k = +-1: norm = exp(0.2 * (2 pi)^(2/3))
    GevreyFunction c = GevreyFunction::cosine(1.0, 1, 1.5, 0.2);
    double expect = std::exp(0.2 * std::pow(kTwoPi, 2.0 / 3.0));
    CHECK(gevrey_norm(c) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("gevrey norm equals the direct partial sum") {
    // f_k = exp(-|2 pi k|^(1/s)) for |k| <= 10
    double s = 1.5, rho = 0.5;
    GevreyFunction::CoeffMap m;
    for (long k = -10; k <= 10; ++k)
        m[k] = std::exp(-std::pow(std::abs(kTwoPi * k), 1.0 / s));
    GevreyFunction f(s, rho, std::move(m));

    double oracle = 0.0;
    for (long k = -10; k <= 10; ++k) {
        double mag = std::exp(-std::pow(std::abs(kTwoPi * k), 1.0 / s));
        oracle += mag * std::exp(rho * std::pow(std::abs(kTwoPi * k), 1.0 / s));
    }
    CHECK(gevrey_norm(f) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("evaluation matches closed forms and a trig oracle") {
    GevreyFunction c = GevreyFunction::cosine(1.0, 1, 1.5, 0.2);
    CHECK(evaluate(c, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(evaluate(c, 0.25)) < 1e-14);

    // random 9-mode real function against a direct cos/sin summation
    std::vector<double> cs{0.3, -0.1, 0.7, 0.05, -0.2, 0.11, 0.0, -0.6, 0.25};
    std::vector<double> sn{0.0, 0.4, -0.35, 0.2, 0.0, -0.15, 0.3, 0.08, -0.05};
    GevreyFunction f = GevreyFunction::from_cos_sin(cs, sn, 1.5, 0.3);
    for (int i = 0; i < 100; ++i) {
        double theta = static_cast<double>(i) / 100.0;
        double oracle = 0.0;
        for (std::size_t k = 0; k < cs.size(); ++k)
            oracle += cs[k] * std::cos(kTwoPi * k * theta);
        for (std::size_t k = 1; k < sn.size(); ++k)
            oracle += sn[k] * std::sin(kTwoPi * k * theta);
        CHECK(evaluate(f, theta) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("conjugate symmetry is enforced at construction") {
    GevreyFunction::CoeffMap bad;
    bad[1] = {0.5, 0.25};
    bad[-1] = {0.5, 0.25};  // should be the conjugate
    CHECK_THROWS_AS(GevreyFunction(1.5, 0.2, std::move(bad)), input_error);
}

TEST_CASE("c0 distance closed forms") {
    GevreyFunction v = GevreyFunction::cosine(6.0, 1, 1.5, 0.2);
    MatrixFunction a = MatrixFunction::schrodinger(v, 0.0);
    CHECK(c0_distance(a, a, 512) == 0.0);

    // Schrodinger pair at E and E' differs by (E - E') in one corner
    MatrixFunction b = MatrixFunction::schrodinger(v, 0.75);
    CHECK(c0_distance(a, b, 512) == doctest::Approx(0.75).epsilon(1e-15));

    // constant shift in a11 via an explicit perturbed matrix
    double eps = 1e-3;
    GevreyFunction z = GevreyFunction::zero(1.5, 0.2);
    GevreyFunction one = GevreyFunction::constant(1.0, 1.5, 0.2);
    MatrixFunction shear = MatrixFunction::shear_pair(z, z, "identity");
    Mat2 diff{eps, 0.0, 0.0, 0.0};
    CHECK(op_norm(diff) == doctest::Approx(eps).epsilon(1e-15));
    (void)one;
}

TEST_CASE("gevrey distance closed form and oracle") {
    GevreyFunction v = GevreyFunction::cosine(6.0, 1, 1.5, 0.2);
    MatrixFunction a = MatrixFunction::schrodinger(v, 0.0);
    CHECK(gevrey_distance(a, a) == 0.0);

    // single-entry perturbation by c*cos: |c| * exp(rho (2 pi)^(1/s))
    double c = 0.01;
    GevreyFunction vp = v - GevreyFunction::cosine(c, 1, 1.5, 0.2);
    MatrixFunction b = MatrixFunction::schrodinger(vp, 0.0);
    double expect = c * std::exp(0.2 * std::pow(kTwoPi, 1.0 / 1.5));
    CHECK(gevrey_distance(a, b) == doctest::Approx(expect).epsilon(1e-13));

    // random pair against recomputation from coefficient differences
    GevreyFunction f1 = random_gevrey(11, 1.5, 0.2, 0.5, 6);
    GevreyFunction f2 = random_gevrey(12, 1.5, 0.2, 0.5, 6);
    MatrixFunction s1 = MatrixFunction::shear_pair(f1, f2, "s1");
    GevreyFunction g1 = random_gevrey(13, 1.5, 0.2, 0.5, 6);
    GevreyFunction g2 = random_gevrey(14, 1.5, 0.2, 0.5, 6);
    MatrixFunction s2 = MatrixFunction::shear_pair(g1, g2, "s2");
    double oracle = 0.0;
    for (int e = 0; e < 4; ++e)
        oracle += gevrey_norm(s1.entry(e) - s2.entry(e));
    CHECK(gevrey_distance(s1, s2) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("mismatched indices are rejected") {
    MatrixFunction a = MatrixFunction::constant(2.0, 0.0, 0.0, 0.5, 1.5, 0.2);
    MatrixFunction b = MatrixFunction::constant(2.0, 0.0, 0.0, 0.5, 1.5, 0.3);
    CHECK_THROWS_AS(gevrey_distance(a, b), input_error);
    CHECK_THROWS_AS(c0_distance(a, b, 512), input_error);
    CHECK_THROWS_AS(c0_distance(a, a, 100), input_error);
}

TEST_CASE("random gevrey functions obey the coefficient decay bound") {
    GevreyFunction k0 = random_gevrey(5, 1.5, 0.2, 1.0, 0);
    CHECK(k0.k_max() == 0);
    CHECK(gevrey_norm(k0) == doctest::Approx(std::abs(k0.coeff(0))).epsilon(1e-15));

    GevreyFunction a = random_gevrey(17, 1.5, 0.2, 0.5, 8);
    GevreyFunction b = random_gevrey(17, 1.5, 0.2, 0.5, 8);
    CHECK(a.coeffs() == b.coeffs());

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GevreyFunction f = random_gevrey(seed, 1.4, 0.3, 0.7, 10);
        for (const auto& [k, c] : f.coeffs()) {
            double bound = std::exp(-(0.3 + 0.7) * std::pow(std::abs(kTwoPi * k), 1.0 / 1.4));
            CHECK(std::abs(c) <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("norm properties: triangle, rho-monotonicity, C0 domination") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GevreyFunction f = random_gevrey(seed * 2 + 1, 1.5, 0.4, 0.5, 9);
        GevreyFunction g = random_gevrey(seed * 2 + 2, 1.5, 0.4, 0.5, 9);
        CHECK(gevrey_norm(f + g) <= gevrey_norm(f) + gevrey_norm(g) + 1e-12);

        GevreyFunction f_lower(1.5, 0.2, f.coeffs());
        CHECK(gevrey_norm(f_lower) <= gevrey_norm(f) + 1e-12);

        double coeff_sum = 0.0;
        for (const auto& [k, c] : f.coeffs()) coeff_sum += std::abs(c);
        double grid_max = 0.0;
        for (int i = 0; i < 512; ++i)
            grid_max = std::max(grid_max, std::abs(evaluate(f, i / 512.0)));
        CHECK(grid_max <= coeff_sum + 1e-12);
        CHECK(coeff_sum <= gevrey_norm(f) + 1e-12);
    }
}

TEST_CASE("matrix constructors verify the determinant") {
    CHECK_THROWS_AS(MatrixFunction::constant(2.0, 0.0, 0.0, 1.0, 1.5, 0.2), input_error);
    MatrixFunction rot = MatrixFunction::rotation(1.5, 0.2);
    Mat2 r = rot.eval(0.125);
    CHECK(det(r) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm(r) == doctest::Approx(1.0).epsilon(1e-12));

    GevreyFunction f = random_gevrey(3, 1.5, 0.2, 0.5, 5);
    GevreyFunction g = random_gevrey(4, 1.5, 0.2, 0.5, 5);
    MatrixFunction sh = MatrixFunction::shear_pair(f, g, "shear");
    for (int i = 0; i < 64; ++i) {
        Mat2 m = sh.eval(i / 64.0);
        CHECK(std::abs(det(m) - 1.0) < 1e-12);
    }
}
