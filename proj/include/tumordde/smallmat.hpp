#ifndef TUMORDDE_SMALLMAT_HPP
#define TUMORDDE_SMALLMAT_HPP

#include <array>
#include <cmath>
#include <cstddef>

#include "tumordde/common.hpp"

namespace tumordde {

// Fixed-size dense helpers for the 2x2 / 3x3 systems that appear in the
// linearizations and E-vector equations. Gaussian elimination with partial
// pivoting is deliberately separate from the Cramer-style closed forms it
// cross-checks.

template <typename T, std::size_t N>
using Vec = std::array<T, N>;

template <typename T, std::size_t N>
using Mat = std::array<std::array<T, N>, N>;

using Vec2 = Vec<double, 2>;
using Vec3 = Vec<double, 3>;
using CVec2 = Vec<cx, 2>;
using CVec3 = Vec<cx, 3>;
using Mat2 = Mat<double, 2>;
using Mat3 = Mat<double, 3>;
using CMat2 = Mat<cx, 2>;
using CMat3 = Mat<cx, 3>;

template <typename T, std::size_t N>
Vec<T, N> matvec(const Mat<T, N>& m, const Vec<T, N>& v) {
    Vec<T, N> r{};
    for (std::size_t i = 0; i < N; ++i) {
        T acc{};
        for (std::size_t j = 0; j < N; ++j) acc += m[i][j] * v[j];
        r[i] = acc;
    }
    return r;
}

template <typename T>
T det2(const Mat<T, 2>& m) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

template <typename T>
T det3(const Mat<T, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
         - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
         + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Solve m*x = b by Gaussian elimination with partial pivoting.
/// Throws NumericError(SingularE) when the pivot collapses.
template <typename T, std::size_t N>
Vec<T, N> solve_dense(Mat<T, N> m, Vec<T, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        double best = std::abs(m[col][col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(m[r][col]) > best) {
                best = std::abs(m[r][col]);
                piv = r;
            }
        }
        if (best < 1e-300)
            throw NumericError(NumericError::Kind::SingularE,
                               "singular linear system in solve_dense");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < N; ++r) {
            T f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < N; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec<T, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        T acc = b[i];
        for (std::size_t j = i + 1; j < N; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

template <typename T, std::size_t N>
double residual_inf(const Mat<T, N>& m, const Vec<T, N>& x, const Vec<T, N>& b) {
    auto mx = matvec(m, x);
    double r = 0.0;
    for (std::size_t i = 0; i < N; ++i) r = std::max(r, std::abs(mx[i] - b[i]));
    return r;
}

} // namespace tumordde

#endif
