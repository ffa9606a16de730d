#include "qpc/cocycle.hpp"

#include "qpc/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qpc;
using namespace qpc::cocycle;
using gevrey::GevreyFunction;
using gevrey::MatrixFunction;

namespace {

QuadratureSpec small_spec(std::size_t K = 256) {
    QuadratureSpec s;
    s.K = K;
    s.threads = 1;
    return s;
}

MatrixFunction amo(double lambda, double energy) {
    GevreyFunction v = GevreyFunction::cosine(2.0 * lambda, 1, 1.5, 0.2);
    return MatrixFunction::schrodinger(v, energy);
}

} // namespace

TEST_CASE("identity cocycle has zero log norm") {
    MatrixFunction id = MatrixFunction::constant(1.0, 0.0, 0.0, 1.0, 1.5, 0.2);
    auto f = freq::Frequency::golden();
    auto theta = freq::make_angle(0, 192);
    LogNormProduct p = transfer_product(id, f, theta, 1, small_spec());
    CHECK(std::abs(p.log_norm()) < 1e-14);
}

TEST_CASE("constant hyperbolic product accumulates exactly") {
    MatrixFunction d = MatrixFunction::constant(2.0, 0.0, 0.0, 0.5, 1.5, 0.2);
    auto f = freq::Frequency::golden();
    auto theta = freq::make_angle(Bigint(5) << 100, 192);
    LogNormProduct p = transfer_product(d, f, theta, 50, small_spec());
    CHECK(p.log_norm() == doctest::Approx(50.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("free Schrodinger product matches an exact rational-arithmetic oracle") {
    // A = [[3,-1],[1,0]] constant; the oracle forms the 100-step product in
    // exact rationals, then takes the closed-form operator norm.
    MatrixFunction a = MatrixFunction::constant(3.0, -1.0, 1.0, 0.0, 1.5, 0.2);
    auto f = freq::Frequency::golden();
    auto theta = freq::make_angle(0, 192);
    const std::size_t N = 100;
    LogNormProduct p = transfer_product(a, f, theta, N, small_spec());

    Rational pa = 1, pb = 0, pc = 0, pd = 1;
    for (std::size_t j = 0; j < N; ++j) {
        Rational na = 3 * pa - pc, nb = 3 * pb - pd;
        Rational nc = pa, nd = pb;
        pa = na; pb = nb; pc = nc; pd = nd;
    }
    double f2 = to_double(pa * pa + pb * pb + pc * pc + pd * pd);
    double dt = to_double(pa * pd - pb * pc);
    double oracle = 0.5 * std::log(0.5 * (f2 + std::sqrt(f2 * f2 - 4.0 * dt * dt)));
    CHECK(p.log_norm() == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("rotation cocycle has zero pointwise exponent") {
    MatrixFunction rot = MatrixFunction::rotation(1.5, 0.2);
    auto f = freq::Frequency::golden();
    auto spec = small_spec();
    for (int i : {0, 3, 11}) {
        auto theta = freq::make_angle(Bigint(i) << 180, 192);
        double u = pointwise_exponent(rot, f, theta, 100, spec);
        CHECK(std::abs(u) < 1e-12);
    }
}

TEST_CASE("AMO pointwise exponent matches a brute-force product oracle") {
    MatrixFunction a = amo(3.0, 0.0);
    auto f = freq::Frequency::golden();
    auto spec = small_spec();
    const std::size_t N = 144;
    auto theta0 = freq::make_angle(0, 192);
    double u = pointwise_exponent(a, f, theta0, N, spec);

    // independent straightforward product with per-step operator-norm
    // normalization, angles from the public orbit op
    auto orbit = freq::orbit_angles(f, theta0, N, 192);
    Mat2 p = Mat2::identity();
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        double theta = orbit[j].to_double();
        double vv = 6.0 * std::cos(2.0 * std::numbers::pi * theta);
        Mat2 m{0.0 - vv, -1.0, 1.0, 0.0};
        p = m * p;
        double nrm = op_norm(p);
        acc += std::log(nrm);
        double inv = 1.0 / nrm;
        p.a *= inv; p.b *= inv; p.c *= inv; p.d *= inv;
    }
    double oracle = (acc + std::log(op_norm(p))) / static_cast<double>(N);
    CHECK(u == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("finite-scale exponents of closed-form cocycles") {
    auto f = freq::Frequency::golden();
    auto spec = small_spec(1024);

    MatrixFunction rot = MatrixFunction::rotation(1.5, 0.2);
    for (std::size_t N : {10, 100}) {
        CHECK(std::abs(finite_scale_le(rot, f, N, spec).value) < 1e-12);
    }

    MatrixFunction d = MatrixFunction::constant(2.0, 0.0, 0.0, 0.5, 1.5, 0.2);
    for (std::size_t N : {10, 100}) {
        CHECK(finite_scale_le(d, f, N, spec).value ==
              doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("free Schrodinger L_N approaches the spectral radius") {
    // L = ln((3+sqrt(5))/2) for the constant matrix [[3,-1],[1,0]]
    MatrixFunction a = MatrixFunction::constant(3.0, -1.0, 1.0, 0.0, 1.5, 0.2);
    auto f = freq::Frequency::golden();
    QuadratureSpec spec;
    spec.K = 4096;
    spec.threads = 2;
    double limit = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    double l = finite_scale_le(a, f, 10000, spec).value;
    CHECK(std::abs(l - limit) <= 1e-3);
}

TEST_CASE("le_sequence equals per-N computation bit for bit") {
    MatrixFunction a = amo(3.0, 0.0);
    auto f = freq::Frequency::golden();
    auto spec = small_spec();
    std::vector<std::size_t> Ns{10, 20, 40, 55};
    auto batch = le_sequence(a, f, Ns, spec);
    REQUIRE(batch.size() == Ns.size());
    for (std::size_t j = 0; j < Ns.size(); ++j) {
        double solo = finite_scale_le(a, f, Ns[j], spec).value;
        CHECK(batch[j].value == solo);
    }
}

TEST_CASE("nested scales are subadditive") {
    MatrixFunction a = amo(3.0, 0.0);
    auto f = freq::Frequency::golden();
    QuadratureSpec spec;
    spec.K = 1024;
    spec.threads = 2;
    auto seq = le_sequence(a, f, {144, 288}, spec);
    CHECK(seq[1].value <= seq[0].value + 1e-9);
}

TEST_CASE("renormalization points do not affect the log norm") {
    MatrixFunction a = amo(3.0, 0.0);
    auto f = freq::Frequency::golden();
    auto theta = freq::make_angle(Bigint(9) << 120, 192);
    QuadratureSpec lazy = small_spec();
    QuadratureSpec eager = small_spec();
    eager.renormalize_every_step = true;
    double u1 = transfer_product(a, f, theta, 500, lazy).log_norm();
    double u2 = transfer_product(a, f, theta, 500, eager).log_norm();
    CHECK(std::abs(u1 - u2) <= 1e-10 * std::abs(u1));
}

TEST_CASE("L_N is bit-identical across thread counts") {
    MatrixFunction a = amo(3.0, 0.25);
    auto f = freq::Frequency::golden();
    QuadratureSpec s1 = small_spec(512), s3 = small_spec(512), s8 = small_spec(512);
    s3.threads = 3;
    s8.threads = 8;
    double v1 = finite_scale_le(a, f, 89, s1).value;
    double v3 = finite_scale_le(a, f, 89, s3).value;
    double v8 = finite_scale_le(a, f, 89, s8).value;
    CHECK(v1 == v3);
    CHECK(v1 == v8);
}

TEST_CASE("quadrature validation") {
    QuadratureSpec bad;
    bad.K = 300;
    CHECK_THROWS_AS(validate(bad), input_error);
    bad.K = 128;
    CHECK_THROWS_AS(validate(bad), input_error);
    bad.K = 4096;
    bad.precision_bits = 100;
    CHECK_THROWS_AS(validate(bad), input_error);
}

TEST_CASE("nonnegativity of pointwise exponents and L_N") {
    auto f = freq::Frequency::silver();
    auto spec = small_spec();
    MatrixFunction a = amo(0.5, 0.3);  // subcritical; L_N near zero
    auto seq = le_sequence(a, f, {8, 16, 64}, spec);
    for (const auto& r : seq) CHECK(r.value >= -1e-12);
}

TEST_CASE("le csv format") {
    std::vector<FiniteScaleLE> rows;
    rows.push_back(FiniteScaleLE{10, 0.5, 256, 192, "a", "f", 1.25});
    std::string csv = le_csv(rows);
    CHECK(csv.find("N,K,L_N,runtime_ms\n") == 0);
    CHECK(csv.find("10,256,0.5,") != std::string::npos);
}
