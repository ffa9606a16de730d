#pragma once

#include "qpc/freq.hpp"
#include "qpc/mat2.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace qpc::gevrey {

// Real-valued torus function stored as finitely supported Fourier
// coefficients with Gevrey indices (s, rho). Conjugate symmetry
// f_{-k} = conj(f_k) is enforced at construction.
class GevreyFunction {
public:
    using CoeffMap = std::map<long, std::complex<double>>;

    GevreyFunction(double s, double rho, CoeffMap coeffs);

    static GevreyFunction zero(double s, double rho);
    static GevreyFunction constant(double value, double s, double rho);
    // amp * cos(2 pi k theta)
    static GevreyFunction cosine(double amp, long k, double s, double rho);
    // c0 + sum_k (cos_k * cos(2 pi k theta) + sin_k * sin(2 pi k theta))
    static GevreyFunction from_cos_sin(const std::vector<double>& cos_coeffs,
                                       const std::vector<double>& sin_coeffs,
                                       double s, double rho);

    double s() const { return s_; }
    double rho() const { return rho_; }
    long k_max() const;
    const CoeffMap& coeffs() const { return coeffs_; }
    std::complex<double> coeff(long k) const;

    friend GevreyFunction operator+(const GevreyFunction& f, const GevreyFunction& g);
    friend GevreyFunction operator-(const GevreyFunction& f, const GevreyFunction& g);
    friend GevreyFunction operator*(const GevreyFunction& f, const GevreyFunction& g);
    GevreyFunction scaled(double c) const;

private:
    double s_, rho_;
    CoeffMap coeffs_;
};

// sum_k |f_k| exp(rho |2 pi k|^{1/s})
double gevrey_norm(const GevreyFunction& f);

// Finite Fourier sum at theta; the imaginary residue is asserted < 1e-12
// and dropped (numeric_error beyond 1e-8).
double evaluate(const GevreyFunction& f, double theta);
double evaluate(const GevreyFunction& f, const freq::FixedPointAngle& theta);

// Seeded function with |f_k| <= exp(-(rho+margin) |2 pi k|^{1/s}).
GevreyFunction random_gevrey(std::uint64_t seed, double s, double rho, double margin,
                             long k_max);

// SL(2,R)-valued Gevrey map: four entries sharing (s, rho); det == 1 is
// verified on a uniform grid to 1e-10 at construction.
class MatrixFunction {
public:
    MatrixFunction(GevreyFunction a11, GevreyFunction a12, GevreyFunction a21,
                   GevreyFunction a22, std::string label);

    // [[E - V, -1], [1, 0]]
    static MatrixFunction schrodinger(const GevreyFunction& potential, double energy);
    static MatrixFunction constant(double a, double b, double c, double d,
                                   double s, double rho);
    // theta-dependent rotation by angle 2 pi theta
    static MatrixFunction rotation(double s, double rho);
    // [[1 + f g, f], [g, 1]]; unit determinant by construction
    static MatrixFunction shear_pair(const GevreyFunction& f, const GevreyFunction& g,
                                     std::string label);

    double s() const { return entries_[0].s(); }
    double rho() const { return entries_[0].rho(); }
    const GevreyFunction& entry(int i) const { return entries_[i]; }
    const std::string& label() const { return label_; }
    long k_max() const;

    Mat2 eval(double theta) const;
    Mat2 eval(const freq::FixedPointAngle& theta) const;

private:
    std::array<GevreyFunction, 4> entries_;
    std::string label_;
};

// Max over a uniform grid of op_norm(A(theta) - B(theta)); a lower bound of
// the true sup-norm. Requires equal (s, rho) and grid >= 256.
double c0_distance(const MatrixFunction& a, const MatrixFunction& b, std::size_t grid);

// Max over a uniform grid of op_norm(A(theta)).
double c0_norm(const MatrixFunction& a, std::size_t grid);

// Sum of the four entrywise Gevrey norms of the differences.
double gevrey_distance(const MatrixFunction& a, const MatrixFunction& b);

} // namespace qpc::gevrey
