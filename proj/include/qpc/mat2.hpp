#pragma once

#include <cmath>

namespace qpc {

// Row-major real 2x2 matrix.
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

inline double det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

inline double frobenius_sq(const Mat2& m) {
    return m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
}

// Largest singular value in closed form:
//   sigma_max^2 = (F^2 + sqrt(F^4 - 4 det^2)) / 2,  F^2 = sum of squared entries.
// The discriminant factors as (F^2 - 2 det)(F^2 + 2 det) with
//   F^2 - 2 det = (a-d)^2 + (b+c)^2,   F^2 + 2 det = (a+d)^2 + (b-c)^2,
// which avoids the cancellation near sigma_max == sigma_min.
inline double op_norm(const Mat2& m) {
    double f2 = frobenius_sq(m);
    double lo = (m.a - m.d) * (m.a - m.d) + (m.b + m.c) * (m.b + m.c);
    double hi = (m.a + m.d) * (m.a + m.d) + (m.b - m.c) * (m.b - m.c);
    return std::sqrt(0.5 * (f2 + std::sqrt(lo * hi)));
}

inline bool finite(const Mat2& m) {
    return std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) &&
           std::isfinite(m.d);
}

} // namespace qpc
