#pragma once

#include <string>
#include <vector>

#include "stclass/curvature.hpp"
#include "stclass/decomposition.hpp"
#include "stclass/metric.hpp"
#include "stclass/version.hpp"

namespace stc {

struct Tolerances {
    double rel = 1e-8;      // projection/residual vanishing, relative to |nabla T|
    double floor = 1e-12;   // absolute floor; below it nabla T counts as parallel
    double identity = 1e-9; // engine self-check threshold, times (1 + |nabla R|)
};

/// Everything recorded at one sample event.
struct PointRecord {
    Vec4 point{};
    double s = 0.0;
    double n_nabla_T = 0.0, n_pi1 = 0.0, n_pi2 = 0.0, n_pi3 = 0.0;
    double r_sym = 0.0, r_codazzi = 0.0, r_omega3 = 0.0, r_ds = 0.0, r_23 = 0.0, r_13 = 0.0;
    double id_bianchi_second = 0.0;
    double id_bianchi_contracted = 0.0;
    double id_bianchi_traced = 0.0;
    double id_conservation = 0.0;
    double id_projective_gap = 0.0;
    double id_scale = 1.0; // 1 + |nabla Riemann|
    bool identity_ok = true;
    bool cross_agree = true;
    std::string verdict;
    bool T_zero = false;
};

struct ClassificationReport {
    int schema_version = 1;
    std::string engine_version = kEngineVersion;
    std::string metric_name;
    std::string metric_description;
    ParamMap params;
    Tolerances tol;
    std::vector<PointRecord> points;
    std::string aggregate_verdict;
    bool aggregate_T_zero = false;
    bool identity_ok = true;
    bool cross_ok = true;
};

inline PointRecord classify_at(const MetricSpec& spec, const Vec4& x, const Tolerances& tol) {
    const PointGeometry pg = compute_point_geometry(spec, x);
    const ResidualSet rs = build_residuals(pg);
    const Decomposition dec = project(pg.nabla_T, pg.g, pg.g_inv);
    const ClassVerdict verdict = classify_point(pg, tol.rel, tol.floor);
    const auto checks = cross_check(pg, dec, rs, tol.rel, tol.floor);

    PointRecord rec;
    rec.point = x;
    rec.s = pg.s;
    rec.n_nabla_T = dec.n_input;
    rec.n_pi1 = dec.n1;
    rec.n_pi2 = dec.n2;
    rec.n_pi3 = dec.n3;
    rec.r_sym = frame_norm(rs.r_sym, pg.g);
    rec.r_codazzi = frame_norm(rs.r_codazzi, pg.g);
    rec.r_omega3 = frame_norm(rs.r_omega3, pg.g);
    rec.r_ds = frame_norm(rs.r_ds, pg.g);
    rec.r_23 = frame_norm(rs.r_23, pg.g);
    rec.r_13 = frame_norm(rs.r_13, pg.g);
    rec.id_bianchi_second = frame_norm_ten5_up2(rs.bianchi_second, pg.g);
    rec.id_bianchi_contracted = frame_norm(rs.bianchi_contracted, pg.g);
    rec.id_bianchi_traced = frame_norm(rs.bianchi_traced, pg.g);
    rec.id_conservation = frame_norm(rs.conservation, pg.g);
    rec.id_projective_gap = frame_norm(rs.dstar_P_gap, pg.g);
    rec.id_scale = 1.0 + frame_norm_ten5_up2(pg.nabla_Riemann, pg.g);
    const double id_tol = tol.identity * rec.id_scale;
    rec.identity_ok = rec.id_bianchi_second <= id_tol && rec.id_bianchi_contracted <= id_tol &&
                      rec.id_bianchi_traced <= id_tol && rec.id_conservation <= id_tol &&
                      rec.id_projective_gap <= id_tol;
    rec.cross_agree = true;
    for (const auto& c : checks) rec.cross_agree = rec.cross_agree && c.agree;
    rec.verdict = to_string(verdict.label);
    rec.T_zero = verdict.T_zero;
    return rec;
}

/// Per-point classification over the sample plan plus the aggregate verdict:
/// a class holds for the region only when it holds at every sampled point, so
/// the aggregate zero-flags are the pointwise conjunctions.
inline ClassificationReport run_classification(const MetricSpec& spec, const SamplePlan& plan,
                                               const Tolerances& tol = {}) {
    if (plan.points.empty()) throw metric_error("sample plan has no points");
    ClassificationReport rep;
    rep.metric_name = spec.name;
    rep.metric_description = spec.description;
    rep.params = spec.params;
    rep.tol = tol;

    bool all_parallel = true, z1 = true, z2 = true, z3 = true, all_T_zero = true;
    for (const Vec4& x : plan.points) {
        PointRecord rec = classify_at(spec, x, tol);
        const ClassLabel label = class_label_from_string(rec.verdict);
        const bool parallel = label == ClassLabel::Parallel;
        all_parallel = all_parallel && parallel;
        // parallel points have every component zero
        const double scale = tol.rel * std::max(rec.n_nabla_T, tol.floor);
        z1 = z1 && (parallel || rec.n_pi1 <= scale);
        z2 = z2 && (parallel || rec.n_pi2 <= scale);
        z3 = z3 && (parallel || rec.n_pi3 <= scale);
        all_T_zero = all_T_zero && rec.T_zero;
        rep.identity_ok = rep.identity_ok && rec.identity_ok;
        rep.cross_ok = rep.cross_ok && rec.cross_agree;
        rep.points.push_back(std::move(rec));
    }
    rep.aggregate_verdict = to_string(label_from_flags(all_parallel, z1, z2, z3));
    rep.aggregate_T_zero = all_T_zero;
    return rep;
}

} // namespace stc
