#pragma once

// Fixed-size dense helpers for the 2x2 and 3x3 Jacobians.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace langcomp {

using Vec3 = std::array<double, 3>;

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

/// Monic characteristic polynomial det(xI - A), coefficients highest degree
/// first (coeffs[0] == 1).
template <std::size_t N>
using CharPoly = std::array<double, N + 1>;

inline double trace(const Mat2& a) { return a[0][0] + a[1][1]; }
inline double determinant(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

inline double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

inline double determinant(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

/// Sum of the principal 2x2 minors.
inline double principal_minor_sum(const Mat3& a) {
    return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) + (a[0][0] * a[2][2] - a[0][2] * a[2][0]) +
           (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
}

inline CharPoly<2> characteristic_polynomial(const Mat2& a) {
    return {1.0, -trace(a), determinant(a)};
}

inline CharPoly<3> characteristic_polynomial(const Mat3& a) {
    return {1.0, -trace(a), principal_minor_sum(a), -determinant(a)};
}

/// Eigenvalues of a real 2x2 matrix from trace and determinant. Real pairs use
/// the product form for the smaller root so tiny eigenvalues next to large
/// ones keep their relative accuracy.
inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& a) {
    const double half_tr = 0.5 * trace(a);
    const double det = determinant(a);
    // discriminant via the entries avoids cancellation in tr^2/4 - det
    const double half_diff = 0.5 * (a[0][0] - a[1][1]);
    const double disc = half_diff * half_diff + a[0][1] * a[1][0];
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double big = half_tr >= 0.0 ? half_tr + root : half_tr - root;
        const double small = big != 0.0 ? det / big : 0.0;
        return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {std::complex<double>(half_tr, im), std::complex<double>(half_tr, -im)};
}

inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

inline double distance(const Vec3& a, const Vec3& b) {
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    const double d2 = a[2] - b[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

}  // namespace langcomp
