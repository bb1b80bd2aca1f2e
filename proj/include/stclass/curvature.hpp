#pragma once

#include <array>
#include <cmath>

#include "stclass/jet.hpp"
#include "stclass/linalg.hpp"
#include "stclass/metric.hpp"
#include "stclass/multi_index.hpp"

namespace stc {

using JetTen3 = std::array<JetMat4, 4>; // [k][i][j]

/// Everything pointwise: metric, connection, curvature, energy-momentum and
/// their covariant derivatives, in coordinate components.
///
/// Index conventions. Riemann[k][l][i][j] = R^k_{lij} is defined through
/// R^k_{lij} X^l = (nabla_i nabla_j - nabla_j nabla_i) X^k, the Ricci tensor
/// is the contraction Ric_{lj} = R^k_{lkj}, and the overall sign is fixed so
/// the scalar curvature of the expanding de Sitter chart is +12 H^2.
/// nabla_T[k][i][j] = nabla_k T_{ij} and likewise for nabla_Ric;
/// nabla_Riemann[m][k][l][i][j] = nabla_m R^k_{lij}.
struct PointGeometry {
    Vec4 point{};
    Mat4 g{}, g_inv{};
    Ten3 Gamma{};          // [k][i][j] = Gamma^k_{ij}
    Ten4 dGamma{};         // [m][k][i][j] = d_m Gamma^k_{ij}
    Ten5 d2Gamma{};        // [m][n][k][i][j]
    Ten4 Riemann{};        // [k][l][i][j] = R^k_{lij}
    Ten5 nabla_Riemann{};  // [m][k][l][i][j]
    Mat4 Ric{};
    double s = 0.0;
    Vec4 ds{};
    Mat4 T{};              // Ric - s g / 2
    Ten3 nabla_T{};        // [k][i][j]
    Ten3 nabla_Ric{};
    Ten4 P{};              // projective curvature P^k_{lij}
    Ten3 dstar_P_direct{}; // -nabla_k P^k_{lij}, direct contraction
    Ten3 dstar_P_ric{};    // -(2/3)(nabla_i Ric_{lj} - nabla_j Ric_{li})
};

/// Christoffel symbols of the Levi-Civita connection as jets (exact through
/// total order 2, so their first and second coordinate derivatives are
/// available downstream).
inline JetTen3 christoffel_jets(const JetMat4& g, const JetMat4& g_inv) {
    JetTen3 out{};
    // dg[a][i][j] = d_a g_{ij}
    std::array<JetMat4, 4> dg{};
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) dg[a][i][j] = g[i][j].partial_jet(a);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            std::array<Jet3, 4> bracket{};
            for (int l = 0; l < 4; ++l) bracket[l] = dg[i][l][j] + dg[j][l][i] - dg[l][i][j];
            for (int k = 0; k < 4; ++k) {
                Jet3 acc;
                for (int l = 0; l < 4; ++l) acc += g_inv[k][l] * bracket[l];
                acc *= 0.5;
                out[k][i][j] = acc;
                out[k][j][i] = acc;
            }
        }
    return out;
}

/// Riemann tensor jets R^k_{lij} (exact through order 1) from Christoffel
/// jets: R^k_{lij} = d_i Gamma^k_{jl} - d_j Gamma^k_{il}
///                   + Gamma^k_{im} Gamma^m_{jl} - Gamma^k_{jm} Gamma^m_{il}.
inline std::array<JetTen3, 4> riemann_jets(const JetTen3& gamma) {
    std::array<JetTen3, 4> out{}; // [k][l][i][j]
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    Jet3 r = gamma[k][j][l].partial_jet(i) - gamma[k][i][l].partial_jet(j);
                    for (int m = 0; m < 4; ++m)
                        r += gamma[k][i][m] * gamma[m][j][l] - gamma[k][j][m] * gamma[m][i][l];
                    out[k][l][i][j] = r;
                    out[k][l][j][i] = -r;
                }
    return out;
}

/// T = Ric - (s/2) g.
inline Mat4 energy_momentum(const Mat4& ric, double s, const Mat4& g) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = ric[i][j] - 0.5 * s * g[i][j];
    return t;
}

/// nabla_k b_{ij} = d_k b_{ij} - Gamma^l_{ki} b_{lj} - Gamma^l_{kj} b_{il}
/// for a symmetric 2-tensor with known coordinate partials db[k][i][j].
inline Ten3 covariant_derivative_sym2(const Mat4& b, const Ten3& db, const Ten3& gamma) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double v = db[k][i][j];
                for (int l = 0; l < 4; ++l)
                    v -= gamma[l][k][i] * b[l][j] + gamma[l][k][j] * b[i][l];
                out[k][i][j] = v;
            }
    return out;
}

/// g^{ik} nabla_i T_{kj}; vanishes identically for the Levi-Civita
/// energy-momentum tensor, so anything large flags an engine defect.
inline Vec4 conservation_check(const Ten3& nabla_t, const Mat4& g_inv) {
    Vec4 out{};
    for (int j = 0; j < 4; ++j) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) v += g_inv[i][k] * nabla_t[i][k][j];
        out[j] = v;
    }
    return out;
}

inline PointGeometry compute_point_geometry(const MetricSpec& spec, const Vec4& x) {
    PointGeometry pg;
    pg.point = x;

    const JetMat4 gj = metric_jets(spec, x);
    const JetMat4 ginvj = jet_matrix_inverse(gj);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            pg.g[i][j] = gj[i][j].value();
            pg.g_inv[i][j] = ginvj[i][j].value();
        }

    const JetTen3 gammaj = christoffel_jets(gj, ginvj);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                pg.Gamma[k][i][j] = gammaj[k][i][j].value();
                for (int m = 0; m < 4; ++m) {
                    MultiIndex mi{};
                    mi.e[m] = 1;
                    pg.dGamma[m][k][i][j] = gammaj[k][i][j].partial(mi);
                    for (int n = 0; n < 4; ++n) {
                        MultiIndex mi2 = mi;
                        mi2.e[n] += 1;
                        pg.d2Gamma[m][n][k][i][j] = gammaj[k][i][j].partial(mi2);
                    }
                }
            }

    const std::array<JetTen3, 4> riemj = riemann_jets(gammaj);

    // Riemann values and covariant derivative
    Ten5 dRiem{}; // [m][k][l][i][j] = d_m R^k_{lij}
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    pg.Riemann[k][l][i][j] = riemj[k][l][i][j].value();
                    for (int m = 0; m < 4; ++m) {
                        MultiIndex mi{};
                        mi.e[m] = 1;
                        dRiem[m][k][l][i][j] = riemj[k][l][i][j].partial(mi);
                    }
                }
    for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) {
                        double v = dRiem[m][k][l][i][j];
                        for (int mu = 0; mu < 4; ++mu) {
                            v += pg.Gamma[k][m][mu] * pg.Riemann[mu][l][i][j];
                            v -= pg.Gamma[mu][m][l] * pg.Riemann[k][mu][i][j];
                            v -= pg.Gamma[mu][m][i] * pg.Riemann[k][l][mu][j];
                            v -= pg.Gamma[mu][m][j] * pg.Riemann[k][l][i][mu];
                        }
                        pg.nabla_Riemann[m][k][l][i][j] = v;
                    }

    // Ricci, scalar curvature, energy-momentum (all as jets valid to order 1)
    JetMat4 ricj{};
    for (int l = 0; l < 4; ++l)
        for (int j = 0; j < 4; ++j) {
            Jet3 acc;
            for (int k = 0; k < 4; ++k) acc += riemj[k][l][k][j];
            ricj[l][j] = acc;
        }
    Jet3 sj;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) sj += ginvj[i][j] * ricj[i][j];
    pg.s = sj.value();
    for (int k = 0; k < 4; ++k) {
        MultiIndex mi{};
        mi.e[k] = 1;
        pg.ds[k] = sj.partial(mi);
    }

    JetMat4 tj{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tj[i][j] = ricj[i][j] - (sj * gj[i][j]) * 0.5;

    Ten3 dRic{}, dT{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            pg.Ric[i][j] = ricj[i][j].value();
            pg.T[i][j] = tj[i][j].value();
            for (int k = 0; k < 4; ++k) {
                MultiIndex mi{};
                mi.e[k] = 1;
                dRic[k][i][j] = ricj[i][j].partial(mi);
                dT[k][i][j] = tj[i][j].partial(mi);
            }
        }
    pg.nabla_Ric = covariant_derivative_sym2(pg.Ric, dRic, pg.Gamma);
    pg.nabla_T = covariant_derivative_sym2(pg.T, dT, pg.Gamma);

    // Projective curvature and its codifferential, two independent routes.
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    double v = pg.Riemann[k][l][i][j];
                    if (k == i) v -= pg.Ric[l][j] / 3.0;
                    if (k == j) v += pg.Ric[l][i] / 3.0;
                    pg.P[k][l][i][j] = v;
                }
    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double direct = 0.0;
                for (int k = 0; k < 4; ++k) {
                    // nabla_k P^k_{lij} from nabla R and nabla Ric
                    double np = pg.nabla_Riemann[k][k][l][i][j];
                    if (k == i) np -= pg.nabla_Ric[k][l][j] / 3.0;
                    if (k == j) np += pg.nabla_Ric[k][l][i] / 3.0;
                    direct += np;
                }
                pg.dstar_P_direct[l][i][j] = -direct;
                pg.dstar_P_ric[l][i][j] =
                    -(2.0 / 3.0) * (pg.nabla_Ric[i][l][j] - pg.nabla_Ric[j][l][i]);
            }

    return pg;
}

// ---------------------------------------------------------------------------
// class-condition residuals and identity checks
// ---------------------------------------------------------------------------

/// Residual tensors whose vanishing characterizes the invariant classes, plus
/// the differential identities every Levi-Civita geometry must satisfy.
struct ResidualSet {
    Ten3 r_sym{};      // nabla_k T_{ij} + nabla_i T_{jk} + nabla_j T_{ki}
    Ten3 r_codazzi{};  // nabla_k T_{ij} - nabla_i T_{kj}
    Ten3 r_omega3{};   // nabla Ric minus its pure-gradient normal form
    Vec4 r_ds{};       // gradient of the scalar curvature
    Ten3 r_23{};       // Codazzi residual of Ric - (s/6) g
    Ten3 r_13{};       // symmetrized residual of Ric - (s/3) g
    Ten3 r_parallel{}; // nabla T itself

    Ten5 bianchi_second{};     // differential Bianchi identity
    Ten3 bianchi_contracted{}; // divergence of R versus antisymmetrized nabla Ric
    Vec4 bianchi_traced{};     // 2 g^{kj} nabla_j R_{ki} - d_i s
    Vec4 conservation{};       // g^{ik} nabla_i T_{kj}
    Ten3 dstar_P_gap{};        // direct contraction minus the Ricci route
};

inline Ten3 residual_sym(const Ten3& nabla_t) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[k][i][j] = nabla_t[k][i][j] + nabla_t[i][j][k] + nabla_t[j][k][i];
    return out;
}

inline Ten3 residual_codazzi(const Ten3& nabla_t) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out[k][i][j] = nabla_t[k][i][j] - nabla_t[i][k][j];
    return out;
}

/// nabla_k R_{ij} - (1/18)(4 (d_k s) g_{ij} + (d_i s) g_{kj} + (d_j s) g_{ik}).
inline Ten3 residual_omega3(const Ten3& nabla_ric, const Vec4& ds, const Mat4& g) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[k][i][j] = nabla_ric[k][i][j] -
                               (4.0 * ds[k] * g[i][j] + ds[i] * g[k][j] + ds[j] * g[i][k]) / 18.0;
    return out;
}

/// Codazzi residual of B = Ric - (s/6) g. Its vanishing says the conformal
/// curvature is divergence-free; the codifferential itself is -res/2.
inline Ten3 residual_23(const Ten3& nabla_ric, const Vec4& ds, const Mat4& g) {
    Ten3 nb{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                nb[k][i][j] = nabla_ric[k][i][j] - ds[k] * g[i][j] / 6.0;
    return residual_codazzi(nb);
}

/// Codifferential of the conformal curvature, defined through the dimension-4
/// divergence identity as -1/2 times the Codazzi residual of Ric - (s/6) g;
/// the rank-4 conformal tensor itself is never assembled.
inline Ten3 dstar_conformal(const Ten3& nabla_ric, const Vec4& ds, const Mat4& g) {
    Ten3 out = residual_23(nabla_ric, ds, g);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out[k][i][j] *= -0.5;
    return out;
}

/// Symmetrized residual of Ric - (s/3) g:
/// sum_cyc nabla_k R_{ij} - (1/3) sum_cyc (d_k s) g_{ij}.
inline Ten3 residual_13(const Ten3& nabla_ric, const Vec4& ds, const Mat4& g) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out[k][i][j] = nabla_ric[k][i][j] + nabla_ric[i][j][k] + nabla_ric[j][k][i] -
                               (ds[k] * g[i][j] + ds[i] * g[j][k] + ds[j] * g[k][i]) / 3.0;
    return out;
}

inline ResidualSet build_residuals(const PointGeometry& pg) {
    ResidualSet r;
    r.r_sym = residual_sym(pg.nabla_T);
    r.r_codazzi = residual_codazzi(pg.nabla_T);
    r.r_omega3 = residual_omega3(pg.nabla_Ric, pg.ds, pg.g);
    r.r_ds = pg.ds;
    r.r_23 = residual_23(pg.nabla_Ric, pg.ds, pg.g);
    r.r_13 = residual_13(pg.nabla_Ric, pg.ds, pg.g);
    r.r_parallel = pg.nabla_T;

    for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        r.bianchi_second[m][k][l][i][j] = pg.nabla_Riemann[m][k][l][i][j] +
                                                          pg.nabla_Riemann[i][k][l][j][m] +
                                                          pg.nabla_Riemann[j][k][l][m][i];

    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double div = 0.0;
                for (int k = 0; k < 4; ++k) div += pg.nabla_Riemann[k][k][l][i][j];
                r.bianchi_contracted[l][i][j] =
                    div + pg.nabla_Ric[j][l][i] - pg.nabla_Ric[i][l][j];
            }

    for (int i = 0; i < 4; ++i) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) v += pg.g_inv[k][j] * pg.nabla_Ric[j][k][i];
        r.bianchi_traced[i] = 2.0 * v - pg.ds[i];
    }

    r.conservation = conservation_check(pg.nabla_T, pg.g_inv);

    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r.dstar_P_gap[l][i][j] = pg.dstar_P_direct[l][i][j] - pg.dstar_P_ric[l][i][j];

    return r;
}

} // namespace stc
