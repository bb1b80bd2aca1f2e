#pragma once

// Brute-force linear algebra on the 36-dimensional fiber of 3-tensors that
// are symmetric in their last two slots and metric-trace-free over the first
// pair. Basis construction goes through null spaces of explicit constraint
// matrices, fully independent of the closed-form projector formulas it
// gates: the totally symmetric trace-free slice, the pure-trace slice forced
// by the membership condition on g-built shapes, and the remainder slice cut
// out by symmetrization and trace constraints.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "stclass/linalg.hpp"

namespace oracle {

using stc::Mat4;
using stc::Ten3;
using stc::Vec4;

using Flat = std::array<double, 64>; // W[k][i][j] flattened as k*16 + i*4 + j

inline Flat flatten(const Ten3& t) {
    Flat f{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) f[static_cast<std::size_t>(k * 16 + i * 4 + j)] = t[k][i][j];
    return f;
}

inline Ten3 unflatten(const Flat& f) {
    Ten3 t{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t[k][i][j] = f[static_cast<std::size_t>(k * 16 + i * 4 + j)];
    return t;
}

/// Null space of an m x n row-major matrix by Gauss-Jordan with partial
/// pivoting; returns basis vectors of the kernel.
inline std::vector<std::vector<double>> null_space(std::vector<std::vector<double>> a, int n,
                                                   double tol = 1e-10) {
    const int m = static_cast<int>(a.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int best = row;
        for (int r = row + 1; r < m; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(col)]))
                best = r;
        if (std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(col)]) < tol) continue;
        std::swap(a[static_cast<std::size_t>(best)], a[static_cast<std::size_t>(row)]);
        const double d = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] /= d;
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<double>> basis;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(free)] = 1.0;
        for (std::size_t p = 0; p < pivot_col.size(); ++p)
            v[static_cast<std::size_t>(pivot_col[p])] = -a[p][static_cast<std::size_t>(free)];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve a dense symmetric positive definite system by Gaussian elimination.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int best = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(a[static_cast<std::size_t>(best)][static_cast<std::size_t>(col)]))
                best = r;
        std::swap(a[static_cast<std::size_t>(best)], a[static_cast<std::size_t>(col)]);
        std::swap(b[static_cast<std::size_t>(best)], b[static_cast<std::size_t>(col)]);
        const double d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            b[static_cast<std::size_t>(i)] / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return x;
}

// The 40 coordinates of tensors symmetric in (i,j): index pairs i <= j.
struct SymBasis {
    // maps: column -> (k, i, j) with i <= j
    std::array<std::array<int, 3>, 40> cols{};

    SymBasis() {
        int n = 0;
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) cols[static_cast<std::size_t>(n++)] = {k, i, j};
    }

    Flat expand(const std::vector<double>& v) const {
        Flat f{};
        for (int c = 0; c < 40; ++c) {
            const auto [k, i, j] = cols[static_cast<std::size_t>(c)];
            f[static_cast<std::size_t>(k * 16 + i * 4 + j)] = v[static_cast<std::size_t>(c)];
            f[static_cast<std::size_t>(k * 16 + j * 4 + i)] = v[static_cast<std::size_t>(c)];
        }
        return f;
    }
};

/// Constraint rows over the 40 symmetric coordinates.
struct FiberOracle {
    SymBasis sym;
    Mat4 g, g_inv;
    std::vector<Flat> basis1, basis2, basis3; // the three slices
    std::vector<Flat> fiber;                  // all members

    explicit FiberOracle(const Mat4& g_) : g(g_), g_inv(stc::mat4_inverse(g_)) {
        build();
    }

    // membership trace rows: for each j, sum_{k,i} g^{ki} W_{kij} = 0
    std::vector<std::vector<double>> membership_rows() const {
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < 4; ++j) {
            std::vector<double> r(40, 0.0);
            for (int c = 0; c < 40; ++c) {
                const auto [k, i, jj] = sym.cols[static_cast<std::size_t>(c)];
                // W_{k i jj} contributes to trace at slot jj (and at slot i
                // via the symmetric copy W_{k jj i})
                if (jj == j) r[static_cast<std::size_t>(c)] += g_inv[k][i];
                if (i == j && i != jj) r[static_cast<std::size_t>(c)] += g_inv[k][jj];
            }
            rows.push_back(std::move(r));
        }
        return rows;
    }

    // free trace rows: for each k, sum_{ij} g^{ij} W_{kij} = 0
    std::vector<std::vector<double>> free_trace_rows() const {
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < 4; ++k) {
            std::vector<double> r(40, 0.0);
            for (int c = 0; c < 40; ++c) {
                const auto [kk, i, j] = sym.cols[static_cast<std::size_t>(c)];
                if (kk != k) continue;
                r[static_cast<std::size_t>(c)] += g_inv[i][j];
                if (i != j) r[static_cast<std::size_t>(c)] += g_inv[j][i];
            }
            rows.push_back(std::move(r));
        }
        return rows;
    }

    // symmetrization rows: for each multiset {a,b,c}, cyclic sum = 0
    std::vector<std::vector<double>> symmetrization_rows() const {
        std::vector<std::vector<double>> rows;
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b)
                for (int c = b; c < 4; ++c) {
                    std::vector<double> r(40, 0.0);
                    const int perms[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
                    for (const auto& p : perms) {
                        const int k = p[0], i = std::min(p[1], p[2]), j = std::max(p[1], p[2]);
                        for (int col = 0; col < 40; ++col) {
                            const auto [kk, ii, jj] = sym.cols[static_cast<std::size_t>(col)];
                            if (kk == k && ii == i && jj == j) r[static_cast<std::size_t>(col)] += 1.0;
                        }
                    }
                    rows.push_back(std::move(r));
                }
        return rows;
    }

    void build() {
        // full fiber: membership only
        for (const auto& v : null_space(membership_rows(), 40)) fiber.push_back(sym.expand(v));

        // slice 2: totally symmetric with every trace zero. Build inside the
        // 20-dim totally symmetric space (coordinates: multisets a<=b<=c),
        // with the single independent trace map.
        {
            std::array<std::array<int, 3>, 20> tcols{};
            int n = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b)
                    for (int c = b; c < 4; ++c) tcols[static_cast<std::size_t>(n++)] = {a, b, c};
            const auto expand_sym = [&](const std::vector<double>& v) {
                Ten3 t{};
                for (int col = 0; col < 20; ++col) {
                    const auto [a, b, c] = tcols[static_cast<std::size_t>(col)];
                    int idx[3] = {a, b, c};
                    std::sort(idx, idx + 3);
                    do {
                        t[idx[0]][idx[1]][idx[2]] = v[static_cast<std::size_t>(col)];
                    } while (std::next_permutation(idx, idx + 3));
                }
                return flatten(t);
            };
            std::vector<std::vector<double>> rows;
            for (int j = 0; j < 4; ++j) {
                std::vector<double> r(20, 0.0);
                for (int col = 0; col < 20; ++col) {
                    const Flat f = expand_sym([&] {
                        std::vector<double> e(20, 0.0);
                        e[static_cast<std::size_t>(col)] = 1.0;
                        return e;
                    }());
                    const Ten3 t = unflatten(f);
                    double tr = 0.0;
                    for (int k = 0; k < 4; ++k)
                        for (int i = 0; i < 4; ++i) tr += g_inv[k][i] * t[k][i][j];
                    r[static_cast<std::size_t>(col)] = tr;
                }
                rows.push_back(std::move(r));
            }
            for (const auto& v : null_space(rows, 20)) basis2.push_back(expand_sym(v));
        }

        // slice 3: within the g-built family alpha t_k g_{ij} + beta (t_i
        // g_{kj} + t_j g_{ik}), membership forces alpha = -5 beta; one ray
        // per direction of t.
        for (int m = 0; m < 4; ++m) {
            Vec4 t{};
            t[static_cast<std::size_t>(m)] = 1.0;
            Ten3 v{};
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        v[k][i][j] = -5.0 * t[k] * g[i][j] + t[i] * g[k][j] + t[j] * g[i][k];
            basis3.push_back(flatten(v));
        }

        // slice 1: membership + free trace + vanishing symmetrization
        {
            auto rows = membership_rows();
            for (auto& r : free_trace_rows()) rows.push_back(std::move(r));
            for (auto& r : symmetrization_rows()) rows.push_back(std::move(r));
            for (const auto& v : null_space(rows, 40)) basis1.push_back(sym.expand(v));
        }
    }

    /// Make a random member: random symmetric tensor minus the g-built
    /// correction w_k g_{ij} whose membership trace reproduces the raw one.
    Ten3 random_member(std::mt19937& gen) const {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Ten3 w{};
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) {
                    w[k][i][j] = u(gen);
                    w[k][j][i] = w[k][i][j];
                }
        Vec4 tr{};
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i) tr[j] += g_inv[k][i] * w[k][i][j];
        // subtracting tr_k g_{ij} removes the membership trace exactly and
        // keeps the (i,j) symmetry
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) w[k][i][j] -= tr[k] * g[i][j];
        return w;
    }

    /// Expands the member over the concatenated slice bases (they span the
    /// fiber) and reassembles the three oracle projections.
    std::array<Ten3, 3> project(const Ten3& w) const {
        std::vector<const Flat*> cols;
        for (const auto& b : basis1) cols.push_back(&b);
        for (const auto& b : basis2) cols.push_back(&b);
        for (const auto& b : basis3) cols.push_back(&b);
        const int n = static_cast<int>(cols.size());
        const Flat rhs = flatten(w);
        std::vector<std::vector<double>> gram(static_cast<std::size_t>(n),
                                              std::vector<double>(static_cast<std::size_t>(n)));
        std::vector<double> proj(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int q = 0; q < 64; ++q)
                    acc += (*cols[static_cast<std::size_t>(a)])[static_cast<std::size_t>(q)] *
                           (*cols[static_cast<std::size_t>(b)])[static_cast<std::size_t>(q)];
                gram[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
            }
            double acc = 0.0;
            for (int q = 0; q < 64; ++q)
                acc += (*cols[static_cast<std::size_t>(a)])[static_cast<std::size_t>(q)] *
                       rhs[static_cast<std::size_t>(q)];
            proj[static_cast<std::size_t>(a)] = acc;
        }
        const std::vector<double> c = solve_dense(std::move(gram), std::move(proj));
        std::array<Flat, 3> parts{};
        int offset = 0;
        const std::vector<Flat>* slices[3] = {&basis1, &basis2, &basis3};
        for (int s = 0; s < 3; ++s) {
            for (const auto& b : *slices[s]) {
                for (int q = 0; q < 64; ++q)
                    parts[static_cast<std::size_t>(s)][static_cast<std::size_t>(q)] +=
                        c[static_cast<std::size_t>(offset)] * b[static_cast<std::size_t>(q)];
                ++offset;
            }
        }
        return {unflatten(parts[0]), unflatten(parts[1]), unflatten(parts[2])};
    }
};

/// Random well-conditioned Lorentz metric g = A^T diag(-1,1,1,1) A.
inline Mat4 random_lorentz_metric(std::mt19937& gen, double spread = 0.3) {
    std::uniform_real_distribution<double> u(-spread, spread);
    Mat4 a{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = (i == j ? 1.0 : 0.0) + u(gen);
    Mat4 g{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int m = 0; m < 4; ++m) acc += a[m][i] * (m == 0 ? -1.0 : 1.0) * a[m][j];
            g[i][j] = acc;
        }
    return g;
}

} // namespace oracle
