#include "qpc/gevrey.hpp"

#include "qpc/detail/splitmix.hpp"
#include "qpc/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qpc::gevrey {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSymmetryTol = 1e-12;
constexpr double kDetTol = 1e-10;
constexpr std::size_t kDetGrid = 256;

double decay_exponent(long k, double s) {
    return std::pow(std::abs(kTwoPi * static_cast<double>(k)), 1.0 / s);
}

} // namespace

GevreyFunction::GevreyFunction(double s, double rho, CoeffMap coeffs)
    : s_(s), rho_(rho), coeffs_(std::move(coeffs)) {
    if (!(s > 1.0)) throw input_error("gevrey: need s > 1");
    if (!(rho > 0.0)) throw input_error("gevrey: need rho > 0");
    // drop exact zeros, then check conjugate symmetry
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = (it->second == std::complex<double>(0.0, 0.0)) ? coeffs_.erase(it)
                                                            : std::next(it);
    for (const auto& [k, c] : coeffs_) {
        std::complex<double> mirror = coeff(-k);
        if (std::abs(mirror - std::conj(c)) > kSymmetryTol)
            throw input_error("gevrey: coefficients break conjugate symmetry at k = " +
                              std::to_string(k));
    }
}

GevreyFunction GevreyFunction::zero(double s, double rho) {
    return GevreyFunction(s, rho, {});
}

GevreyFunction GevreyFunction::constant(double value, double s, double rho) {
    CoeffMap m;
    if (value != 0.0) m[0] = value;
    return GevreyFunction(s, rho, std::move(m));
}

GevreyFunction GevreyFunction::cosine(double amp, long k, double s, double rho) {
    CoeffMap m;
    if (amp != 0.0 && k != 0) {
        m[k] = 0.5 * amp;
        m[-k] = 0.5 * amp;
    } else if (amp != 0.0) {
        m[0] = amp;
    }
    return GevreyFunction(s, rho, std::move(m));
}

GevreyFunction GevreyFunction::from_cos_sin(const std::vector<double>& cos_coeffs,
                                            const std::vector<double>& sin_coeffs,
                                            double s, double rho) {
    CoeffMap m;
    auto add = [&m](long k, std::complex<double> c) {
        auto [it, fresh] = m.emplace(k, c);
        if (!fresh) it->second += c;
    };
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
        double v = cos_coeffs[k];
        if (v == 0.0) continue;
        if (k == 0) add(0, v);
        else {
            add(static_cast<long>(k), 0.5 * v);
            add(-static_cast<long>(k), 0.5 * v);
        }
    }
    for (std::size_t k = 1; k < sin_coeffs.size(); ++k) {
        double v = sin_coeffs[k];
        if (v == 0.0) continue;
        add(static_cast<long>(k), std::complex<double>(0.0, -0.5 * v));
        add(-static_cast<long>(k), std::complex<double>(0.0, 0.5 * v));
    }
    return GevreyFunction(s, rho, std::move(m));
}

long GevreyFunction::k_max() const {
    long m = 0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(k));
    return m;
}

std::complex<double> GevreyFunction::coeff(long k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

GevreyFunction operator+(const GevreyFunction& f, const GevreyFunction& g) {
    GevreyFunction::CoeffMap m = f.coeffs_;
    for (const auto& [k, c] : g.coeffs_) {
        auto [it, fresh] = m.emplace(k, c);
        if (!fresh) it->second += c;
    }
    return GevreyFunction(f.s_, f.rho_, std::move(m));
}

GevreyFunction operator-(const GevreyFunction& f, const GevreyFunction& g) {
    return f + g.scaled(-1.0);
}

GevreyFunction operator*(const GevreyFunction& f, const GevreyFunction& g) {
    GevreyFunction::CoeffMap m;
    for (const auto& [k1, c1] : f.coeffs_)
        for (const auto& [k2, c2] : g.coeffs_) {
            auto [it, fresh] = m.emplace(k1 + k2, c1 * c2);
            if (!fresh) it->second += c1 * c2;
        }
    return GevreyFunction(f.s_, f.rho_, std::move(m));
}

GevreyFunction GevreyFunction::scaled(double c) const {
    CoeffMap m = coeffs_;
    for (auto& [k, v] : m) v *= c;
    return GevreyFunction(s_, rho_, std::move(m));
}

double gevrey_norm(const GevreyFunction& f) {
    double sum = 0.0;
    for (const auto& [k, c] : f.coeffs())
        sum += std::abs(c) * std::exp(f.rho() * decay_exponent(k, f.s()));
    return sum;
}

double evaluate(const GevreyFunction& f, double theta) {
    std::complex<double> sum(0.0, 0.0);
    for (const auto& [k, c] : f.coeffs()) {
        double phase = kTwoPi * static_cast<double>(k) * theta;
        sum += c * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    double residue = std::abs(sum.imag());
    if (residue > 1e-8)
        throw numeric_error("gevrey evaluate: imaginary residue " + std::to_string(residue) +
                            " (conjugate symmetry broken)");
    return sum.real();
}

double evaluate(const GevreyFunction& f, const freq::FixedPointAngle& theta) {
    return evaluate(f, theta.to_double());
}

GevreyFunction random_gevrey(std::uint64_t seed, double s, double rho, double margin,
                             long k_max) {
    if (!(margin > 0.0)) throw input_error("random_gevrey: need margin > 0");
    if (k_max < 0) throw input_error("random_gevrey: need k_max >= 0");
    detail::SplitMix64 rng(seed);
    GevreyFunction::CoeffMap m;
    {
        double u = rng.unit();
        m[0] = 2.0 * u - 1.0;  // |f_0| <= 1 = exp(-(rho+margin)*0)
    }
    for (long k = 1; k <= k_max; ++k) {
        double bound = std::exp(-(rho + margin) * decay_exponent(k, s));
        double u = rng.unit();
        double phase = kTwoPi * rng.unit();
        std::complex<double> c =
            u * bound * std::complex<double>(std::cos(phase), std::sin(phase));
        m[k] = c;
        m[-k] = std::conj(c);
    }
    return GevreyFunction(s, rho, std::move(m));
}

MatrixFunction::MatrixFunction(GevreyFunction a11, GevreyFunction a12, GevreyFunction a21,
                               GevreyFunction a22, std::string label)
    : entries_{std::move(a11), std::move(a12), std::move(a21), std::move(a22)},
      label_(std::move(label)) {
    for (int i = 1; i < 4; ++i)
        if (entries_[i].s() != entries_[0].s() || entries_[i].rho() != entries_[0].rho())
            throw input_error("matrix function: entries disagree on (s, rho)");
    for (std::size_t i = 0; i < kDetGrid; ++i) {
        double theta = static_cast<double>(i) / static_cast<double>(kDetGrid);
        Mat2 m = eval(theta);
        if (std::abs(det(m) - 1.0) > kDetTol) {
            std::ostringstream msg;
            msg << "matrix function '" << label_ << "': det = " << det(m)
                << " at theta = " << theta << " (not SL(2,R))";
            throw input_error(msg.str());
        }
    }
}

MatrixFunction MatrixFunction::schrodinger(const GevreyFunction& potential, double energy) {
    double s = potential.s(), rho = potential.rho();
    GevreyFunction a11 = GevreyFunction::constant(energy, s, rho) - potential;
    std::ostringstream name;
    name << "schrodinger(E=" << energy << ")";
    return MatrixFunction(std::move(a11), GevreyFunction::constant(-1.0, s, rho),
                          GevreyFunction::constant(1.0, s, rho), GevreyFunction::zero(s, rho),
                          name.str());
}

MatrixFunction MatrixFunction::constant(double a, double b, double c, double d,
                                        double s, double rho) {
    std::ostringstream name;
    name << "constant(" << a << "," << b << "," << c << "," << d << ")";
    return MatrixFunction(GevreyFunction::constant(a, s, rho),
                          GevreyFunction::constant(b, s, rho),
                          GevreyFunction::constant(c, s, rho),
                          GevreyFunction::constant(d, s, rho), name.str());
}

MatrixFunction MatrixFunction::rotation(double s, double rho) {
    GevreyFunction c = GevreyFunction::cosine(1.0, 1, s, rho);
    GevreyFunction sn = GevreyFunction::from_cos_sin({}, {0.0, 1.0}, s, rho);
    return MatrixFunction(c, sn.scaled(-1.0), sn, c, "rotation");
}

MatrixFunction MatrixFunction::shear_pair(const GevreyFunction& f, const GevreyFunction& g,
                                          std::string label) {
    double s = f.s(), rho = f.rho();
    GevreyFunction one = GevreyFunction::constant(1.0, s, rho);
    return MatrixFunction(one + f * g, f, g, one, std::move(label));
}

long MatrixFunction::k_max() const {
    long m = 0;
    for (const auto& e : entries_) m = std::max(m, e.k_max());
    return m;
}

Mat2 MatrixFunction::eval(double theta) const {
    Mat2 m{evaluate(entries_[0], theta), evaluate(entries_[1], theta),
           evaluate(entries_[2], theta), evaluate(entries_[3], theta)};
    return m;
}

Mat2 MatrixFunction::eval(const freq::FixedPointAngle& theta) const {
    return eval(theta.to_double());
}

double c0_distance(const MatrixFunction& a, const MatrixFunction& b, std::size_t grid) {
    if (a.s() != b.s() || a.rho() != b.rho())
        throw input_error("c0_distance: mismatched (s, rho)");
    if (grid < 256) throw input_error("c0_distance: need grid >= 256");
    double best = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        double theta = static_cast<double>(i) / static_cast<double>(grid);
        Mat2 ma = a.eval(theta), mb = b.eval(theta);
        Mat2 diff{ma.a - mb.a, ma.b - mb.b, ma.c - mb.c, ma.d - mb.d};
        best = std::max(best, op_norm(diff));
    }
    return best;
}

double c0_norm(const MatrixFunction& a, std::size_t grid) {
    double best = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        double theta = static_cast<double>(i) / static_cast<double>(grid);
        best = std::max(best, op_norm(a.eval(theta)));
    }
    return best;
}

double gevrey_distance(const MatrixFunction& a, const MatrixFunction& b) {
    if (a.s() != b.s() || a.rho() != b.rho())
        throw input_error("gevrey_distance: mismatched (s, rho)");
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += gevrey_norm(a.entry(i) - b.entry(i));
    return sum;
}

} // namespace qpc::gevrey
