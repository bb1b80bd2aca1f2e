#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stclass/decomposition.hpp"
#include "stclass/geodesic.hpp"
#include "stclass/pipeline.hpp"

namespace stc {

using json = nlohmann::json;

inline json to_json(const PointRecord& r) {
    return json{
        {"point", {r.point[0], r.point[1], r.point[2], r.point[3]}},
        {"s", r.s},
        {"norms", {{"nabla_T", r.n_nabla_T}, {"pi1", r.n_pi1}, {"pi2", r.n_pi2}, {"pi3", r.n_pi3}}},
        {"residuals",
         {{"sym", r.r_sym},
          {"codazzi", r.r_codazzi},
          {"omega3", r.r_omega3},
          {"ds", r.r_ds},
          {"r23", r.r_23},
          {"r13", r.r_13}}},
        {"identities",
         {{"bianchi_second", r.id_bianchi_second},
          {"bianchi_contracted", r.id_bianchi_contracted},
          {"bianchi_traced", r.id_bianchi_traced},
          {"conservation", r.id_conservation},
          {"projective_gap", r.id_projective_gap},
          {"scale", r.id_scale}}},
        {"identity_ok", r.identity_ok},
        {"cross_agree", r.cross_agree},
        {"verdict", r.verdict},
        {"T_zero", r.T_zero},
    };
}

inline PointRecord point_record_from_json(const json& j) {
    PointRecord r;
    for (int i = 0; i < 4; ++i) r.point[i] = j.at("point").at(static_cast<std::size_t>(i)).get<double>();
    r.s = j.at("s").get<double>();
    const auto& n = j.at("norms");
    r.n_nabla_T = n.at("nabla_T").get<double>();
    r.n_pi1 = n.at("pi1").get<double>();
    r.n_pi2 = n.at("pi2").get<double>();
    r.n_pi3 = n.at("pi3").get<double>();
    const auto& res = j.at("residuals");
    r.r_sym = res.at("sym").get<double>();
    r.r_codazzi = res.at("codazzi").get<double>();
    r.r_omega3 = res.at("omega3").get<double>();
    r.r_ds = res.at("ds").get<double>();
    r.r_23 = res.at("r23").get<double>();
    r.r_13 = res.at("r13").get<double>();
    const auto& id = j.at("identities");
    r.id_bianchi_second = id.at("bianchi_second").get<double>();
    r.id_bianchi_contracted = id.at("bianchi_contracted").get<double>();
    r.id_bianchi_traced = id.at("bianchi_traced").get<double>();
    r.id_conservation = id.at("conservation").get<double>();
    r.id_projective_gap = id.at("projective_gap").get<double>();
    r.id_scale = id.at("scale").get<double>();
    r.identity_ok = j.at("identity_ok").get<bool>();
    r.cross_agree = j.at("cross_agree").get<bool>();
    r.verdict = j.at("verdict").get<std::string>();
    r.T_zero = j.at("T_zero").get<bool>();
    return r;
}

inline json to_json(const ClassificationReport& rep) {
    json pts = json::array();
    for (const auto& p : rep.points) pts.push_back(to_json(p));
    return json{
        {"schema", "stclass.classification"},
        {"schema_version", rep.schema_version},
        {"engine_version", rep.engine_version},
        {"metric",
         {{"name", rep.metric_name},
          {"description", rep.metric_description},
          {"params", rep.params}}},
        {"tolerances", {{"rel", rep.tol.rel}, {"floor", rep.tol.floor}, {"identity", rep.tol.identity}}},
        {"aggregate", {{"verdict", rep.aggregate_verdict}, {"T_zero", rep.aggregate_T_zero}}},
        {"identity_ok", rep.identity_ok},
        {"cross_ok", rep.cross_ok},
        {"points", pts},
    };
}

inline ClassificationReport report_from_json(const json& j) {
    ClassificationReport rep;
    rep.schema_version = j.at("schema_version").get<int>();
    rep.engine_version = j.at("engine_version").get<std::string>();
    const auto& m = j.at("metric");
    rep.metric_name = m.at("name").get<std::string>();
    rep.metric_description = m.at("description").get<std::string>();
    rep.params = m.at("params").get<ParamMap>();
    const auto& t = j.at("tolerances");
    rep.tol.rel = t.at("rel").get<double>();
    rep.tol.floor = t.at("floor").get<double>();
    rep.tol.identity = t.at("identity").get<double>();
    rep.aggregate_verdict = j.at("aggregate").at("verdict").get<std::string>();
    rep.aggregate_T_zero = j.at("aggregate").at("T_zero").get<bool>();
    rep.identity_ok = j.at("identity_ok").get<bool>();
    rep.cross_ok = j.at("cross_ok").get<bool>();
    for (const auto& p : j.at("points")) rep.points.push_back(point_record_from_json(p));
    return rep;
}

// ---------------------------------------------------------------------------
// table rendering (6 significant digits)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string num6(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

} // namespace detail

inline void print_table(std::ostream& os, const ClassificationReport& rep) {
    os << "metric: " << rep.metric_name;
    if (!rep.params.empty()) {
        os << " (";
        bool first = true;
        for (const auto& [k, v] : rep.params) {
            if (!first) os << ", ";
            os << k << "=" << detail::num6(v);
            first = false;
        }
        os << ")";
    }
    os << "\n";
    if (!rep.metric_description.empty()) os << "  " << rep.metric_description << "\n";
    os << "tolerances: rel=" << detail::num6(rep.tol.rel) << " floor=" << detail::num6(rep.tol.floor)
       << " identity=" << detail::num6(rep.tol.identity) << "\n\n";
    os << std::left << std::setw(36) << "point" << std::right << std::setw(13) << "s"
       << std::setw(13) << "|nabla T|" << std::setw(13) << "|pi1|" << std::setw(13) << "|pi2|"
       << std::setw(13) << "|pi3|" << std::setw(10) << "verdict" << "\n";
    for (const auto& p : rep.points) {
        std::ostringstream pt;
        pt << "(" << detail::num6(p.point[0]) << ", " << detail::num6(p.point[1]) << ", "
           << detail::num6(p.point[2]) << ", " << detail::num6(p.point[3]) << ")";
        os << std::left << std::setw(36) << pt.str() << std::right << std::setw(13)
           << detail::num6(p.s) << std::setw(13) << detail::num6(p.n_nabla_T) << std::setw(13)
           << detail::num6(p.n_pi1) << std::setw(13) << detail::num6(p.n_pi2) << std::setw(13)
           << detail::num6(p.n_pi3) << std::setw(10) << p.verdict << "\n";
    }
    os << "\naggregate verdict: " << rep.aggregate_verdict;
    if (rep.aggregate_T_zero) os << "   (T == 0: vacuum, the parallel verdict is degenerate)";
    os << "\nidentity checks: " << (rep.identity_ok ? "ok" : "FAILED")
       << "   residual/projection agreement: " << (rep.cross_ok ? "ok" : "FAILED") << "\n";
}

inline void print_matrix(std::ostream& os, const char* name, const Mat4& m) {
    os << name << ":\n";
    for (int i = 0; i < 4; ++i) {
        os << "  ";
        for (int j = 0; j < 4; ++j) os << std::setw(13) << detail::num6(m[i][j]);
        os << "\n";
    }
}

} // namespace stc
