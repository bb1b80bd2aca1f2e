#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "stclass/curvature.hpp"
#include "stclass/error.hpp"
#include "stclass/linalg.hpp"

namespace stc {

// ---------------------------------------------------------------------------
// pseudo-orthonormal frames and frame norms
// ---------------------------------------------------------------------------

/// Frame vectors e[a][i] (a labels the frame leg, i the coordinate
/// component): e0 timelike with g(e0,e0) = -1, e1..e3 spacelike unit legs,
/// built by Gram-Schmidt from the coordinate basis.
struct Frame {
    Mat4 e{};
};

/// The positive-definite norm used for every vanishing test: tensor
/// components are expressed in a pseudo-orthonormal frame and the Euclidean
/// norm of those components is returned. Chart-robust, unlike coordinate
/// sup-norms; sign-definite, unlike the Lorentz-invariant pairing, which can
/// vanish on nonzero null components.
inline Frame orthonormal_frame(const Mat4& g) {
    if (!(g[0][0] < 0.0))
        throw metric_error("frame construction needs g_00 < 0 at the point "
                           "(chart unsuitable for a timelike first leg)");
    Frame f;
    const auto dot = [&](const Vec4& a, const Vec4& b) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v += g[i][j] * a[i] * b[j];
        return v;
    };
    std::array<Vec4, 4> e{};
    std::array<double, 4> eps{};
    for (int a = 0; a < 4; ++a) {
        Vec4 v{};
        v[a] = 1.0;
        for (int b = 0; b < a; ++b) {
            const double proj = eps[b] * dot(v, e[b]);
            for (int i = 0; i < 4; ++i) v[i] -= proj * e[b][i];
        }
        const double n = dot(v, v);
        if (a == 0) {
            if (!(n < 0.0)) throw metric_error("frame construction: first leg not timelike");
            const double inv = 1.0 / std::sqrt(-n);
            for (int i = 0; i < 4; ++i) e[a][i] = v[i] * inv;
            eps[a] = -1.0;
        } else {
            if (!(n > 0.0))
                throw metric_error("frame construction: spacelike leg degenerate (signature?)");
            const double inv = 1.0 / std::sqrt(n);
            for (int i = 0; i < 4; ++i) e[a][i] = v[i] * inv;
            eps[a] = 1.0;
        }
    }
    for (int a = 0; a < 4; ++a) f.e[a] = {e[a][0], e[a][1], e[a][2], e[a][3]};
    return f;
}

namespace detail {

/// In-place frame transform of one axis of a flat all-covariant tensor of
/// the given rank: out[..a..] = sum_i e[a][i] in[..i..].
inline void frame_transform_axis(double* data, int rank, int axis, const Mat4& e) {
    int stride = 1;
    for (int r = rank - 1; r > axis; --r) stride *= 4;
    int outer = 1;
    for (int r = 0; r < axis; ++r) outer *= 4;
    const int block = stride * 4;
    for (int o = 0; o < outer; ++o) {
        double* base = data + o * block;
        for (int s = 0; s < stride; ++s) {
            double in[4];
            for (int a = 0; a < 4; ++a) in[a] = base[a * stride + s];
            for (int a = 0; a < 4; ++a) {
                double v = 0.0;
                for (int i = 0; i < 4; ++i) v += e[a][i] * in[i];
                base[a * stride + s] = v;
            }
        }
    }
}

inline double frame_norm_flat(double* data, int rank, const Mat4& g) {
    const Frame f = orthonormal_frame(g);
    for (int axis = 0; axis < rank; ++axis) frame_transform_axis(data, rank, axis, f.e);
    int n = 1;
    for (int r = 0; r < rank; ++r) n *= 4;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += data[k] * data[k];
    return std::sqrt(acc);
}

/// Lower the upper (first) index of a mixed tensor stored flat, in place:
/// out[k...] = sum_m g_{km} in[m...].
inline void lower_first_axis(double* data, int rank, const Mat4& g) {
    frame_transform_axis(data, rank, 0, g);
}

} // namespace detail

inline double frame_norm(const Vec4& v, const Mat4& g) {
    Vec4 tmp = v;
    return detail::frame_norm_flat(tmp.data(), 1, g);
}

inline double frame_norm(const Mat4& m, const Mat4& g) {
    std::array<double, 16> tmp{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tmp[static_cast<std::size_t>(i * 4 + j)] = m[i][j];
    return detail::frame_norm_flat(tmp.data(), 2, g);
}

inline double frame_norm(const Ten3& t, const Mat4& g) {
    std::array<double, 64> tmp{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) tmp[static_cast<std::size_t>(k * 16 + i * 4 + j)] = t[k][i][j];
    return detail::frame_norm_flat(tmp.data(), 3, g);
}

/// Rank-4 tensor with an upper first index (curvature-type); the index is
/// lowered with g before the frame transform.
inline double frame_norm_ten4_up1(const Ten4& t, const Mat4& g) {
    std::array<double, 256> tmp{};
    int n = 0;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) tmp[static_cast<std::size_t>(n++)] = t[k][l][i][j];
    detail::lower_first_axis(tmp.data(), 4, g);
    return detail::frame_norm_flat(tmp.data(), 4, g);
}

/// Rank-5 tensor nabla_m R^k_{lij}: the second index is upper. Swap it to the
/// front, lower it, then frame-norm.
inline double frame_norm_ten5_up2(const Ten5& t, const Mat4& g) {
    std::array<double, 1024> tmp{};
    int n = 0;
    for (int k = 0; k < 4; ++k) // upper index first
        for (int m = 0; m < 4; ++m)
            for (int l = 0; l < 4; ++l)
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) tmp[static_cast<std::size_t>(n++)] = t[m][k][l][i][j];
    detail::lower_first_axis(tmp.data(), 5, g);
    return detail::frame_norm_flat(tmp.data(), 5, g);
}

// ---------------------------------------------------------------------------
// the three-way decomposition
// ---------------------------------------------------------------------------

/// Metric contraction over the first two slots, g^{ki} W_{kij}. Membership in
/// the decomposable bundle requires this to vanish; for nabla T it does, by
/// the conservation identity.
inline Vec4 membership_trace(const Ten3& w, const Mat4& g_inv) {
    Vec4 out{};
    for (int j = 0; j < 4; ++j) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i) v += g_inv[k][i] * w[k][i][j];
        out[j] = v;
    }
    return out;
}

/// The free trace t_k = g^{ij} W_{kij} over the symmetric pair.
inline Vec4 free_trace(const Ten3& w, const Mat4& g_inv) {
    Vec4 out{};
    for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v += g_inv[i][j] * w[k][i][j];
        out[k] = v;
    }
    return out;
}

/// The pure-trace normal form carrying a vector t:
/// v(t)_{kij} = (1/18)(5 t_k g_{ij} - t_i g_{kj} - t_j g_{ik}).
/// It is the unique g-built shape, symmetric in (i,j), killed by the
/// membership trace, whose free trace reproduces t.
inline Ten3 trace_form(const Vec4& t, const Mat4& g) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[k][i][j] = (5.0 * t[k] * g[i][j] - t[i] * g[k][j] - t[j] * g[i][k]) / 18.0;
    return out;
}

inline Ten3 cyclic_symmetrize(const Ten3& w) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[k][i][j] = (w[k][i][j] + w[i][j][k] + w[j][k][i]) / 3.0;
    return out;
}

struct Decomposition {
    Ten3 pi1{}, pi2{}, pi3{};
    Vec4 theta{}; // the free trace of the input
    double n1 = 0.0, n2 = 0.0, n3 = 0.0;
    double n_input = 0.0;
};

/// Validates membership (symmetry in the last two slots is structural; the
/// metric trace over the first pair must vanish up to `trace_tol` relative to
/// the tensor's own frame norm) and throws membership_error otherwise.
inline Vec4 validate_membership(const Ten3& w, const Mat4& g, const Mat4& g_inv,
                                double trace_tol = 1e-6) {
    // the "1 +" keeps roundoff-level tensors (numerically zero, possibly with
    // O(1) relative asymmetry) from tripping a structural rejection
    double scale = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) scale = std::max(scale, std::abs(w[k][i][j]));
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(w[k][i][j] - w[k][j][i]) > 1e-9 * (1.0 + scale))
                    throw membership_error(
                        "tensor is not symmetric in its last two slots (structural)");
    const Vec4 tr = membership_trace(w, g_inv);
    const double tn = frame_norm(tr, g);
    const double wn = frame_norm(w, g);
    // the absolute 1e-12 allowance matches the classification floor: tensors
    // below it count as zero, and zero is a member
    if (tn > trace_tol * wn + 1e-12) {
        std::string msg = "tensor fails the membership trace condition: g^{ki} W_kij = (";
        for (int j = 0; j < 4; ++j) msg += (j ? ", " : "") + std::to_string(tr[j]);
        msg += "), frame norm " + std::to_string(tn) +
               "; for a Ricci-derivative input this contraction equals grad(s)/2 and only "
               "vanishes when the scalar curvature is constant";
        throw membership_error(msg);
    }
    return tr;
}

/// Splits a member into its pure-trace part, its totally symmetric
/// trace-free part, and the remainder. The three pieces are mutually
/// orthogonal under the invariant pairing and sum back to the input.
inline Decomposition project(const Ten3& w, const Mat4& g, const Mat4& g_inv,
                             double trace_tol = 1e-6) {
    validate_membership(w, g, g_inv, trace_tol);
    Decomposition d;
    d.theta = free_trace(w, g_inv);
    d.pi3 = trace_form(d.theta, g);
    Ten3 rest{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rest[k][i][j] = w[k][i][j] - d.pi3[k][i][j];
    d.pi2 = cyclic_symmetrize(rest);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) d.pi1[k][i][j] = rest[k][i][j] - d.pi2[k][i][j];
    d.n1 = frame_norm(d.pi1, g);
    d.n2 = frame_norm(d.pi2, g);
    d.n3 = frame_norm(d.pi3, g);
    d.n_input = frame_norm(w, g);
    return d;
}

/// The indefinite invariant pairing <A,B> = g^kk' g^ii' g^jj' A_kij B_k'i'j'.
inline double invariant_pairing(const Ten3& a, const Ten3& b, const Mat4& g_inv) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double bu = 0.0;
                for (int kk = 0; kk < 4; ++kk)
                    for (int ii = 0; ii < 4; ++ii)
                        for (int jj = 0; jj < 4; ++jj)
                            bu += g_inv[k][kk] * g_inv[i][ii] * g_inv[j][jj] * b[kk][ii][jj];
                acc += a[k][i][j] * bu;
            }
    return acc;
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

enum class ClassLabel { Parallel, O1, O2, O3, O12, O13, O23, Generic };

inline const char* to_string(ClassLabel c) {
    switch (c) {
        case ClassLabel::Parallel: return "PARALLEL";
        case ClassLabel::O1: return "O1";
        case ClassLabel::O2: return "O2";
        case ClassLabel::O3: return "O3";
        case ClassLabel::O12: return "O12";
        case ClassLabel::O13: return "O13";
        case ClassLabel::O23: return "O23";
        case ClassLabel::Generic: return "GENERIC";
    }
    return "?";
}

inline ClassLabel class_label_from_string(const std::string& s) {
    for (const auto c : {ClassLabel::Parallel, ClassLabel::O1, ClassLabel::O2, ClassLabel::O3,
                         ClassLabel::O12, ClassLabel::O13, ClassLabel::O23, ClassLabel::Generic})
        if (s == to_string(c)) return c;
    throw error("unknown class label '" + s + "'");
}

/// Smallest class whose complement components vanish. z1/z2/z3 say whether
/// the corresponding projection is numerically zero.
inline ClassLabel label_from_flags(bool parallel, bool z1, bool z2, bool z3) {
    if (parallel) return ClassLabel::Parallel;
    if (z2 && z3) return ClassLabel::O1;
    if (z1 && z3) return ClassLabel::O2;
    if (z1 && z2) return ClassLabel::O3;
    if (z3) return ClassLabel::O12;
    if (z2) return ClassLabel::O13;
    if (z1) return ClassLabel::O23;
    return ClassLabel::Generic;
}

struct ClassVerdict {
    ClassLabel label = ClassLabel::Generic;
    double n_nabla_T = 0.0;
    double n1 = 0.0, n2 = 0.0, n3 = 0.0;
    bool z1 = false, z2 = false, z3 = false;
    bool T_zero = false; // vacuum note: the energy-momentum tensor itself vanishes
    double tol_rel = 0.0, tol_floor = 0.0;
};

/// A projection counts as zero when its frame norm is at most
/// tol_rel * max(|nabla T|, tol_floor); the verdict is PARALLEL when nabla T
/// itself sits below the absolute floor.
inline ClassVerdict classify_tensor(const Ten3& nabla_t, const Mat4& g, const Mat4& g_inv,
                                    double tol_rel = 1e-8, double tol_floor = 1e-12) {
    const Decomposition d = project(nabla_t, g, g_inv);
    ClassVerdict v;
    v.tol_rel = tol_rel;
    v.tol_floor = tol_floor;
    v.n_nabla_T = d.n_input;
    v.n1 = d.n1;
    v.n2 = d.n2;
    v.n3 = d.n3;
    const double scale = tol_rel * std::max(d.n_input, tol_floor);
    v.z1 = d.n1 <= scale;
    v.z2 = d.n2 <= scale;
    v.z3 = d.n3 <= scale;
    const bool parallel = d.n_input <= tol_floor;
    v.label = label_from_flags(parallel, v.z1, v.z2, v.z3);
    return v;
}

inline ClassVerdict classify_point(const PointGeometry& pg, double tol_rel = 1e-8,
                                   double tol_floor = 1e-12) {
    ClassVerdict v = classify_tensor(pg.nabla_T, pg.g, pg.g_inv, tol_rel, tol_floor);
    v.T_zero = frame_norm(pg.T, pg.g) <= std::max(tol_floor, tol_rel * frame_norm(pg.g, pg.g));
    return v;
}

// ---------------------------------------------------------------------------
// projection-route versus residual-route cross-check
// ---------------------------------------------------------------------------

struct CrossCheckEntry {
    std::string name;            // which equivalence
    double residual_norm = 0.0;  // from the curvature-side residual tensor
    double projection_norm = 0.0; // from the decomposition side
    bool residual_zero = false;
    bool projection_zero = false;
    bool agree = false;
};

/// The six equivalences between the per-class residual tensors and the
/// vanishing patterns of the three projections, evaluated under a shared
/// relative tolerance. Any disagreement marks an engine defect.
inline std::array<CrossCheckEntry, 6> cross_check(const PointGeometry& pg,
                                                  const Decomposition& d, const ResidualSet& rs,
                                                  double tol_rel = 1e-8,
                                                  double tol_floor = 1e-12) {
    // the additive floor keeps roundoff-level inputs (below the parallel
    // floor) from producing arbitrary flag flips on either side
    const double scale = tol_rel * std::max(d.n_input, tol_floor) + tol_floor;
    const bool z1 = d.n1 <= scale;
    const bool z2 = d.n2 <= scale;
    const bool z3 = d.n3 <= scale;
    const auto entry = [&](const char* name, double res_norm, double proj_norm, bool proj_zero) {
        CrossCheckEntry e;
        e.name = name;
        e.residual_norm = res_norm;
        e.projection_norm = proj_norm;
        e.residual_zero = res_norm <= 3.0 * scale; // residuals are small sums of projections
        e.projection_zero = proj_zero;
        e.agree = e.residual_zero == e.projection_zero;
        return e;
    };
    const Mat4& g = pg.g;
    return {
        entry("symmetrized gradient of T vs pi2+pi3", frame_norm(rs.r_sym, g),
              std::hypot(d.n2, d.n3), z2 && z3),
        entry("Codazzi gradient of T vs pi1+pi3", frame_norm(rs.r_codazzi, g),
              std::hypot(d.n1, d.n3), z1 && z3),
        entry("Ricci-gradient normal form vs pi1+pi2", frame_norm(rs.r_omega3, g),
              std::hypot(d.n1, d.n2), z1 && z2),
        entry("constant scalar curvature vs pi3", frame_norm(rs.r_ds, g), d.n3, z3),
        entry("divergence-free conformal curvature vs pi1", frame_norm(rs.r_23, g), d.n1, z1),
        entry("trace-adjusted symmetrized gradient vs pi2", frame_norm(rs.r_13, g), d.n2, z2),
    };
}

} // namespace stc
