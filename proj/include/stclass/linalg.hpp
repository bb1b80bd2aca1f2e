#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "stclass/error.hpp"

namespace stc {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;
using Ten3 = std::array<Mat4, 4>;
using Ten4 = std::array<Ten3, 4>;
using Ten5 = std::array<Ten4, 4>;

inline Mat4 mat4_identity() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    return m;
}

/// Gauss-Jordan with partial pivoting.
inline Mat4 mat4_inverse(const Mat4& in) {
    Mat4 a = in;
    Mat4 inv = mat4_identity();
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw eval_error("singular 4x4 matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = 1.0 / a[col][col];
        for (int c = 0; c < 4; ++c) {
            a[col][c] *= d;
            inv[col][c] *= d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (int c = 0; c < 4; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

/// Eigenvalues of a symmetric n x n matrix (row-major) by cyclic Jacobi
/// rotations. Ascending order.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * n + j)]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-300) break;
        double scale = 0.0;
        for (int i = 0; i < n; ++i) scale += std::abs(at(i, i));
        if (std::sqrt(off) < 1e-15 * (scale + 1e-30)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline std::array<double, 4> symmetric_eigenvalues4(const Mat4& g) {
    std::vector<double> a(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[static_cast<std::size_t>(i * 4 + j)] = g[i][j];
    const auto ev = symmetric_eigenvalues(std::move(a), 4);
    return {ev[0], ev[1], ev[2], ev[3]};
}

} // namespace stc
