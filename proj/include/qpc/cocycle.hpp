#pragma once

#include "qpc/freq.hpp"
#include "qpc/gevrey.hpp"
#include "qpc/mat2.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qpc::cocycle {

// Discretization of the torus integral plus engine knobs.
struct QuadratureSpec {
    std::size_t K = 4096;          // grid size; power of two >= 256
    unsigned precision_bits = 192; // fixed-point angle precision; multiple of 64, <= 256
    unsigned threads = 0;          // 0 = QPC_THREADS or hardware count
    bool renormalize_every_step = false;  // invariance-testing knob
};

void validate(const QuadratureSpec& spec);

// Matrix product kept as a unit-Frobenius factor and an accumulated log
// scale, so products with norm ~ exp(N L) never overflow.
struct LogNormProduct {
    Mat2 normalized;
    double log_scale = 0.0;

    double log_norm() const;  // ln of the operator norm of the full product
};

// Ordered product A(theta + (N-1) alpha) ... A(theta + alpha) A(theta).
LogNormProduct transfer_product(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                                const freq::FixedPointAngle& theta, std::size_t N,
                                const QuadratureSpec& spec);

// u_N(theta) = ln ||A_N(theta)|| / N.
double pointwise_exponent(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                          const freq::FixedPointAngle& theta, std::size_t N,
                          const QuadratureSpec& spec);

struct FiniteScaleLE {
    std::size_t N = 0;
    double value = 0.0;  // nats per step
    std::size_t K = 0;
    unsigned precision_bits = 0;
    std::string cocycle_label;
    std::string freq_label;
    double runtime_ms = 0.0;
};

// Shared-orbit batch: one pass per grid point up to max(Ns), capturing the
// pointwise exponents at every requested scale. Values are bit-identical to
// independent runs at each N, for any thread count.
struct BatchResult {
    std::vector<std::size_t> Ns;
    std::vector<std::vector<double>> u;  // u[j][i]: scale Ns[j], grid point i
    std::vector<FiniteScaleLE> le;
};

BatchResult le_batch(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                     std::vector<std::size_t> Ns, const QuadratureSpec& spec);

FiniteScaleLE finite_scale_le(const gevrey::MatrixFunction& A, const freq::Frequency& f,
                              std::size_t N, const QuadratureSpec& spec);

std::vector<FiniteScaleLE> le_sequence(const gevrey::MatrixFunction& A,
                                       const freq::Frequency& f,
                                       const std::vector<std::size_t>& Ns,
                                       const QuadratureSpec& spec);

// CSV columns: N, K, L_N, runtime_ms (floats with 17 significant digits).
std::string le_csv(const std::vector<FiniteScaleLE>& rows);

} // namespace qpc::cocycle
