#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "stclass/curvature.hpp"
#include "stclass/linalg.hpp"
#include "stclass/metric.hpp"

namespace stc {

struct GeodesicState {
    Vec4 x{};
    Vec4 v{}; // dx/ds
    double s_param = 0.0;
};

namespace detail {

/// Christoffel values from first-order jets of the metric components; this is
/// the per-stage workhorse of the integrator.
inline Ten3 christoffel_values(const MetricSpec& spec, const Vec4& x) {
    Mat4 g{};
    Ten3 dg{}; // [a][i][j] = d_a g_{ij}
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const auto& e = spec.comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!e) continue;
            const Dual4 d = eval_dual(e, x, spec.params);
            g[i][j] = d.v;
            g[j][i] = d.v;
            for (int a = 0; a < 4; ++a) {
                dg[a][i][j] = d.d[static_cast<std::size_t>(a)];
                dg[a][j][i] = d.d[static_cast<std::size_t>(a)];
            }
        }
    const Mat4 ginv = mat4_inverse(g);
    Ten3 gamma{};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                double acc = 0.0;
                for (int l = 0; l < 4; ++l)
                    acc += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                gamma[k][i][j] = 0.5 * acc;
                gamma[k][j][i] = gamma[k][i][j];
            }
        }
    return gamma;
}

struct Deriv {
    Vec4 dx{}, dv{};
};

inline Deriv geodesic_rhs(const MetricSpec& spec, const Vec4& x, const Vec4& v) {
    const Ten3 gamma = christoffel_values(spec, x);
    Deriv d;
    d.dx = v;
    for (int k = 0; k < 4; ++k) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) acc += gamma[k][i][j] * v[i] * v[j];
        d.dv[k] = -acc;
    }
    return d;
}

} // namespace detail

/// Classical fixed-step RK4 on the first-order system (x, v). Throws when a
/// stage leaves the metric's domain box (reporting the step) or the state
/// stops being finite.
inline std::vector<GeodesicState> integrate_geodesic(const MetricSpec& spec, const Vec4& x0,
                                                     const Vec4& v0, double h, int steps) {
    if (!(h > 0.0)) throw metric_error("geodesic step size must be positive");
    if (steps < 1) throw metric_error("geodesic needs at least one step");
    if (!spec.in_domain(x0)) throw metric_error("geodesic start point outside the domain box");

    std::vector<GeodesicState> traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    GeodesicState st{x0, v0, 0.0};
    traj.push_back(st);

    const auto check = [&](const Vec4& x, int step) {
        for (const double c : x)
            if (!std::isfinite(c)) {
                std::ostringstream os;
                os << "geodesic state became non-finite at step " << step;
                throw metric_error(os.str());
            }
        if (!spec.in_domain(x)) {
            std::ostringstream os;
            os << "geodesic left the domain box of '" << spec.name << "' at step " << step;
            throw metric_error(os.str());
        }
    };

    for (int n = 1; n <= steps; ++n) {
        const Vec4 x = st.x;
        const Vec4 v = st.v;
        const auto k1 = detail::geodesic_rhs(spec, x, v);
        Vec4 x2, v2;
        for (int i = 0; i < 4; ++i) {
            x2[i] = x[i] + 0.5 * h * k1.dx[i];
            v2[i] = v[i] + 0.5 * h * k1.dv[i];
        }
        check(x2, n);
        const auto k2 = detail::geodesic_rhs(spec, x2, v2);
        Vec4 x3, v3;
        for (int i = 0; i < 4; ++i) {
            x3[i] = x[i] + 0.5 * h * k2.dx[i];
            v3[i] = v[i] + 0.5 * h * k2.dv[i];
        }
        check(x3, n);
        const auto k3 = detail::geodesic_rhs(spec, x3, v3);
        Vec4 x4, v4;
        for (int i = 0; i < 4; ++i) {
            x4[i] = x[i] + h * k3.dx[i];
            v4[i] = v[i] + h * k3.dv[i];
        }
        check(x4, n);
        const auto k4 = detail::geodesic_rhs(spec, x4, v4);
        for (int i = 0; i < 4; ++i) {
            st.x[i] += h / 6.0 * (k1.dx[i] + 2.0 * (k2.dx[i] + k3.dx[i]) + k4.dx[i]);
            st.v[i] += h / 6.0 * (k1.dv[i] + 2.0 * (k2.dv[i] + k3.dv[i]) + k4.dv[i]);
        }
        st.s_param += h;
        check(st.x, n);
        traj.push_back(st);
    }
    return traj;
}

enum class IntegralField { Metric, Ricci };

struct IntegralDriftReport {
    double q0 = 0.0;
    double max_drift = 0.0;
    int steps = 0;
    double step_size = 0.0;
};

/// Value of Q = a_{ij} v^i v^j at one state for the chosen field.
inline double quadratic_form(const MetricSpec& spec, const GeodesicState& st,
                             IntegralField field) {
    Mat4 a{};
    if (field == IntegralField::Metric) {
        a = spec.value_matrix(st.x);
    } else {
        const PointGeometry pg = compute_point_geometry(spec, st.x);
        a = pg.Ric;
    }
    double q = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q += a[i][j] * st.v[i] * st.v[j];
    return q;
}

/// Samples Q at every trajectory state and reports the worst excursion from
/// its initial value. A symmetric field is a first integral of the geodesic
/// flow exactly when its symmetrized covariant derivative vanishes; the drift
/// of Q_g bounds the integrator error and calibrates every other field.
inline IntegralDriftReport quadratic_integral_drift(const MetricSpec& spec,
                                                    const std::vector<GeodesicState>& traj,
                                                    IntegralField field) {
    if (traj.empty()) throw metric_error("empty trajectory");
    IntegralDriftReport rep;
    rep.steps = static_cast<int>(traj.size()) - 1;
    rep.step_size = traj.size() > 1 ? traj[1].s_param - traj[0].s_param : 0.0;
    rep.q0 = quadratic_form(spec, traj.front(), field);
    for (const auto& st : traj) {
        const double q = quadratic_form(spec, st, field);
        rep.max_drift = std::max(rep.max_drift, std::abs(q - rep.q0));
    }
    return rep;
}

} // namespace stc
