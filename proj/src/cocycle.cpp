#include "qpc/cocycle.hpp"

#include "qpc/errors.hpp"
#include "qpc/reduce.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qpc::cocycle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDetTol = 1e-8;
// Renormalize once the running Frobenius norm exceeds 2^64.
constexpr double kRenormThresholdSq = 0x1.0p128;

unsigned ceil_log2(std::size_t n) {
    return n > 1 ? static_cast<unsigned>(std::bit_width(n - 1)) : 0u;
}

// Fixed-point angle on 1..4 64-bit limbs; the modulus 2^(64*limbs) is the
// natural wrap of the carry chain.
struct FlatAngle {
    std::array<std::uint64_t, 4> w{};
    unsigned limbs = 3;

    static FlatAngle from_bigint(const Bigint& numerator, unsigned bits) {
        FlatAngle a;
        a.limbs = bits / 64;
        std::array<std::uint64_t, 4> tmp{};
        std::size_t count = 0;
        mpz_export(tmp.data(), &count, -1, sizeof(std::uint64_t), 0, 0,
                   numerator.get_mpz_t());
        for (std::size_t i = 0; i < a.limbs && i < count; ++i) a.w[i] = tmp[i];
        return a;
    }

    void add(const FlatAngle& o) {
        unsigned __int128 carry = 0;
        for (unsigned i = 0; i < limbs; ++i) {
            unsigned __int128 sum = static_cast<unsigned __int128>(w[i]) + o.w[i] + carry;
            w[i] = static_cast<std::uint64_t>(sum);
            carry = sum >> 64;
        }
    }

    // Truncated top 53 bits; matches FixedPointAngle::to_double.
    double to_double() const {
        return std::ldexp(static_cast<double>(w[limbs - 1] >> 11), -53);
    }
};

// Flattened Fourier tables for the four entries; f_e(theta) =
// Re(c[e][0]) + sum_k 2 Re(c[e][k] z^k) with z = exp(2 pi i theta).
struct EvalTable {
    long kmax = 0;
    std::array<std::vector<std::complex<double>>, 4> c;

    explicit EvalTable(const gevrey::MatrixFunction& A) {
        kmax = A.k_max();
        for (int e = 0; e < 4; ++e) {
            c[e].resize(kmax + 1);
            for (long k = 0; k <= kmax; ++k) c[e][k] = A.entry(e).coeff(k);
        }
    }

    Mat2 eval(double theta) const {
        std::array<double, 4> f{c[0][0].real(), c[1][0].real(), c[2][0].real(),
                                c[3][0].real()};
        if (kmax > 0) {
            double ph = kTwoPi * theta;
            std::complex<double> z(std::cos(ph), std::sin(ph));
            std::complex<double> zk(1.0, 0.0);
            for (long k = 1; k <= kmax; ++k) {
                zk *= z;
                for (int e = 0; e < 4; ++e)
                    f[e] += 2.0 * (c[e][k].real() * zk.real() - c[e][k].imag() * zk.imag());
            }
        }
        return Mat2{f[0], f[1], f[2], f[3]};
    }
};

struct RunningProduct {
    Mat2 p = Mat2::identity();
    double log_scale = 0.0;

    void push(const Mat2& factor, bool force_renorm, std::size_t step, std::size_t theta_index) {
        p = factor * p;
        double f2 = frobenius_sq(p);
        if (!std::isfinite(f2)) {
            std::ostringstream msg;
            msg << "transfer product: non-finite entry at step " << step
                << " (grid point " << theta_index << ")";
            throw numeric_error(msg.str());
        }
        if (force_renorm || f2 > kRenormThresholdSq) {
            double norm = std::sqrt(f2);
            double inv = 1.0 / norm;
            p.a *= inv; p.b *= inv; p.c *= inv; p.d *= inv;
            log_scale += std::log(norm);
        }
    }

    double log_norm() const { return log_scale + std::log(op_norm(p)); }
};

void check_factor(const Mat2& m, std::size_t step) {
    if (std::abs(det(m) - 1.0) > kDetTol) {
        std::ostringstream msg;
        msg << "cocycle factor at step " << step << " has det = " << det(m)
            << " (|det-1| > 1e-8)";
        throw numeric_error(msg.str());
    }
}

void require_precision(std::size_t N, unsigned bits) {
    unsigned need = ceil_log2(N) + 64u;
    if (bits < need) {
        std::ostringstream msg;
        msg << "N = " << N << " requires at least " << need << " precision bits, got "
            << bits;
        throw input_error(msg.str());
    }
}

} // namespace

void validate(const QuadratureSpec& spec) {
    if (spec.K < 256 || !std::has_single_bit(spec.K))
        throw input_error("quadrature: K must be a power of two >= 256");
    if (spec.precision_bits == 0 || spec.precision_bits > 256 ||
        spec.precision_bits % 64 != 0)
        throw input_error("quadrature: precision_bits must be 64, 128, 192 or 256");
}

double LogNormProduct::log_norm() const { return log_scale + std::log(op_norm(normalized)); }

LogNormProduct transfer_product(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                                const freq::FixedPointAngle& theta, std::size_t N,
                                const QuadratureSpec& spec) {
    validate(spec);
    if (N < 1) throw input_error("transfer_product: need N >= 1");
    if (theta.bits != spec.precision_bits)
        throw input_error("transfer_product: theta precision does not match spec");
    require_precision(N, spec.precision_bits);

    EvalTable table(A);
    FlatAngle alpha = FlatAngle::from_bigint(
        freq::alpha_fixed_point(f, spec.precision_bits).numerator, spec.precision_bits);
    FlatAngle cur = FlatAngle::from_bigint(theta.numerator, spec.precision_bits);

    RunningProduct run;
    for (std::size_t j = 0; j < N; ++j) {
        Mat2 m = table.eval(cur.to_double());
        check_factor(m, j);
        run.push(m, spec.renormalize_every_step, j, 0);
        cur.add(alpha);
    }
    double f2 = frobenius_sq(run.p);
    double norm = std::sqrt(f2);
    double inv = 1.0 / norm;
    LogNormProduct out;
    out.normalized = Mat2{run.p.a * inv, run.p.b * inv, run.p.c * inv, run.p.d * inv};
    out.log_scale = run.log_scale + std::log(norm);
    return out;
}

double pointwise_exponent(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                          const freq::FixedPointAngle& theta, std::size_t N,
                          const QuadratureSpec& spec) {
    LogNormProduct p = transfer_product(A, f, theta, N, spec);
    return p.log_norm() / static_cast<double>(N);
}

BatchResult le_batch(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                     std::vector<std::size_t> Ns, const QuadratureSpec& spec) {
    validate(spec);
    if (Ns.empty()) throw input_error("le_batch: empty scale list");
    for (std::size_t j = 1; j < Ns.size(); ++j)
        if (Ns[j] <= Ns[j - 1]) throw input_error("le_batch: scales must be increasing");
    if (Ns.front() < 1) throw input_error("le_batch: need N >= 1");
    std::size_t n_max = Ns.back();
    require_precision(n_max, spec.precision_bits);

    auto start = std::chrono::steady_clock::now();

    EvalTable table(A);
    FlatAngle alpha = FlatAngle::from_bigint(
        freq::alpha_fixed_point(f, spec.precision_bits).numerator, spec.precision_bits);

    const std::size_t K = spec.K;
    unsigned grid_shift = spec.precision_bits - ceil_log2(K);

    BatchResult out;
    out.Ns = Ns;
    out.u.assign(Ns.size(), std::vector<double>(K, 0.0));

    unsigned threads = resolve_threads(spec.threads);
    parallel_for(K, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            // theta_i = i / K as an exact dyadic angle: numerator = i << grid_shift
            FlatAngle cur;
            cur.limbs = spec.precision_bits / 64;
            {
                unsigned limb = grid_shift / 64, off = grid_shift % 64;
                cur.w[limb] = static_cast<std::uint64_t>(i) << off;
                if (off != 0 && limb + 1 < cur.limbs)
                    cur.w[limb + 1] = static_cast<std::uint64_t>(i) >> (64 - off);
            }
            RunningProduct run;
            std::size_t next = 0;
            for (std::size_t j = 0; j < n_max; ++j) {
                Mat2 m = table.eval(cur.to_double());
                check_factor(m, j);
                run.push(m, spec.renormalize_every_step, j, i);
                cur.add(alpha);
                while (next < Ns.size() && j + 1 == Ns[next]) {
                    out.u[next][i] = run.log_norm() / static_cast<double>(Ns[next]);
                    ++next;
                }
            }
        }
    });

    out.le.reserve(Ns.size());
    for (std::size_t j = 0; j < Ns.size(); ++j) {
        double L = pairwise_sum(out.u[j]) / static_cast<double>(K);
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
        out.le.push_back(FiniteScaleLE{Ns[j], L, K, spec.precision_bits, A.label(),
                                       f.label(), ms});
    }
    return out;
}

FiniteScaleLE finite_scale_le(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                              std::size_t N, const QuadratureSpec& spec) {
    return le_batch(A, f, {N}, spec).le.front();
}

std::vector<FiniteScaleLE> le_sequence(const gevrey::MatrixFunction& A,
                                       const freq::Frequency& f,
                                       const std::vector<std::size_t>& Ns,
                                       const QuadratureSpec& spec) {
    BatchResult r = le_batch(A, f, Ns, spec);
    return std::move(r.le);
}

std::string le_csv(const std::vector<FiniteScaleLE>& rows) {
    std::string out = "N,K,L_N,runtime_ms\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g\n", r.N, r.K, r.value,
                      r.runtime_ms);
        out += buf;
    }
    return out;
}

} // namespace qpc::cocycle
