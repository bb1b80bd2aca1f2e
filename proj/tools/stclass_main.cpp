// Command-line surface: catalog browsing, pointwise classification over a
// sample region, component dumps, decomposition of tensor fixtures, geodesic
// first-integral checks. Human tables or machine JSON.
//
// Exit codes: 0 success; 2 metric/domain/input error; 3 internal identity
// check out of tolerance (the engine refuses to classify with a verdict it
// cannot trust).

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stclass/curvature.hpp"
#include "stclass/decomposition.hpp"
#include "stclass/geodesic.hpp"
#include "stclass/metric.hpp"
#include "stclass/pipeline.hpp"
#include "stclass/report_io.hpp"
#include "stclass/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIdentity = 3;

void print_error_json(const std::string& type, const std::string& message) {
    json err{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

struct MetricOptions {
    std::string name;
    std::string file;
    std::vector<std::string> params; // key=value
    // common shortcuts
    std::string m, H, a, phi, eps, seed, f, g00, spatial;

    void attach(CLI::App* cmd) {
        cmd->add_option("--metric", name, "catalog metric name");
        cmd->add_option("--metric-file", file, "path to a metric definition file");
        cmd->add_option("--param", params, "extra parameter as key=value (repeatable)");
        cmd->add_option("--m", m, "mass parameter");
        cmd->add_option("--H", H, "expansion rate parameter");
        cmd->add_option("--a", a, "radius (einstein_static) or scale-factor expression (flrw)");
        cmd->add_option("--phi", phi, "conformal factor expression");
        cmd->add_option("--eps", eps, "perturbation amplitude");
        cmd->add_option("--seed", seed, "perturbation seed");
        cmd->add_option("--f", f, "warp factor expression (sinyukov_warped)");
        cmd->add_option("--g00", g00, "time-time component expression (sinyukov_warped)");
        cmd->add_option("--spatial", spatial,
                        "six spatial component expressions 11;12;13;22;23;33 (sinyukov_warped)");
    }

    stc::MetricSpec resolve() const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw stc::metric_error("cannot open metric file '" + file + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            return stc::load_metric(ss.str());
        }
        if (name.empty())
            throw stc::metric_error("no metric given: use --metric <name> or --metric-file <path>");
        std::map<std::string, std::string> args;
        const auto put = [&](const char* key, const std::string& v) {
            if (!v.empty()) args[key] = v;
        };
        put("m", m);
        put("H", H);
        put("a", a);
        put("phi", phi);
        put("eps", eps);
        put("seed", seed);
        put("f", f);
        put("g00", g00);
        put("spatial", spatial);
        for (const auto& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw stc::metric_error("--param needs key=value, got '" + kv + "'");
            args[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        return stc::catalog(name, args);
    }
};

stc::Vec4 parse_point(const std::string& text) {
    stc::Vec4 x{};
    std::stringstream ss(text);
    std::string tok;
    int n = 0;
    while (std::getline(ss, tok, ',')) {
        if (n >= 4) throw stc::metric_error("point needs exactly four comma-separated numbers");
        try {
            x[static_cast<std::size_t>(n++)] = std::stod(tok);
        } catch (const std::exception&) {
            throw stc::metric_error("bad number '" + tok + "' in point");
        }
    }
    if (n != 4) throw stc::metric_error("point needs exactly four comma-separated numbers");
    return x;
}

stc::SamplePlan parse_plan(const stc::MetricSpec& spec, const std::string& grid,
                           const std::string& points) {
    if (!points.empty()) {
        std::vector<stc::Vec4> pts;
        std::stringstream ss(points);
        std::string tok;
        while (std::getline(ss, tok, ';'))
            if (!tok.empty()) pts.push_back(parse_point(tok));
        if (pts.empty()) throw stc::metric_error("--points produced no sample points");
        std::sort(pts.begin(), pts.end());
        return stc::SamplePlan::from_points(std::move(pts));
    }
    if (grid.empty() || grid == "default") return stc::SamplePlan::default_grid(spec);
    std::array<int, 4> counts{};
    std::stringstream ss(grid);
    std::string tok;
    int n = 0;
    while (std::getline(ss, tok, 'x')) {
        if (n >= 4) throw stc::metric_error("--grid needs four x-separated counts");
        try {
            counts[static_cast<std::size_t>(n++)] = std::stoi(tok);
        } catch (const std::exception&) {
            throw stc::metric_error("bad grid count '" + tok + "'");
        }
    }
    if (n != 4) throw stc::metric_error("--grid needs four x-separated counts, e.g. 3x3x3x3");
    return stc::SamplePlan::grid(spec, counts);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw stc::metric_error("cannot open output file '" + out_path + "'");
    out << text;
}

int cmd_catalog_list(const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& e : stc::catalog_entries())
            arr.push_back({{"name", e.name}, {"parameters", e.parameters}, {"brief", e.brief}});
        std::cout << json{{"catalog", arr}}.dump(2) << "\n";
    } else {
        for (const auto& e : stc::catalog_entries()) {
            std::cout << "  " << e.name;
            if (!e.parameters.empty()) std::cout << "  (defaults: " << e.parameters << ")";
            std::cout << "\n      " << e.brief << "\n";
        }
    }
    return kExitOk;
}

int cmd_classify(const MetricOptions& mopt, const std::string& grid, const std::string& points,
                 const stc::Tolerances& tol, const std::string& format,
                 const std::string& out_path) {
    const stc::MetricSpec spec = mopt.resolve();
    const stc::SamplePlan plan = parse_plan(spec, grid, points);
    const stc::ClassificationReport rep = stc::run_classification(spec, plan, tol);
    if (!rep.identity_ok || !rep.cross_ok) {
        print_error_json("identity-check",
                         "internal differential-identity residuals exceed tolerance; "
                         "refusing to report a verdict");
        return kExitIdentity;
    }
    if (format == "json") {
        write_output(stc::to_json(rep).dump(2) + "\n", out_path);
    } else {
        std::ostringstream os;
        stc::print_table(os, rep);
        write_output(os.str(), out_path);
    }
    return kExitOk;
}

int cmd_components(const MetricOptions& mopt, const std::string& point_text,
                   const std::string& format, const std::string& out_path) {
    const stc::MetricSpec spec = mopt.resolve();
    const stc::Vec4 x = parse_point(point_text);
    const stc::PointGeometry pg = stc::compute_point_geometry(spec, x);
    const stc::ResidualSet rs = stc::build_residuals(pg);
    const stc::Decomposition dec = stc::project(pg.nabla_T, pg.g, pg.g_inv);

    if (format == "json") {
        json j;
        j["metric"] = spec.name;
        j["point"] = {x[0], x[1], x[2], x[3]};
        const auto mat = [](const stc::Mat4& m) {
            json rows = json::array();
            for (int i = 0; i < 4; ++i) {
                json row = json::array();
                for (int k = 0; k < 4; ++k) row.push_back(m[i][k]);
                rows.push_back(row);
            }
            return rows;
        };
        j["g"] = mat(pg.g);
        j["g_inv"] = mat(pg.g_inv);
        j["Ric"] = mat(pg.Ric);
        j["T"] = mat(pg.T);
        j["s"] = pg.s;
        j["ds"] = {pg.ds[0], pg.ds[1], pg.ds[2], pg.ds[3]};
        json gamma = json::array();
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int l = i; l < 4; ++l)
                    if (pg.Gamma[k][i][l] != 0.0)
                        gamma.push_back({{"upper", k}, {"lower", {i, l}}, {"value", pg.Gamma[k][i][l]}});
        j["christoffel_nonzero"] = gamma;
        {
            json nt = json::array();
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i)
                    for (int l = 0; l < 4; ++l) nt.push_back(pg.nabla_T[k][i][l]);
            j["nabla_T"] = nt;
            json p = json::array();
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    for (int i = 0; i < 4; ++i)
                        for (int jj = 0; jj < 4; ++jj) p.push_back(pg.P[k][l][i][jj]);
            j["P"] = p;
        }
        j["norms"] = {{"nabla_T", stc::frame_norm(pg.nabla_T, pg.g)},
                      {"nabla_Ric", stc::frame_norm(pg.nabla_Ric, pg.g)},
                      {"Ric", stc::frame_norm(pg.Ric, pg.g)},
                      {"P", stc::frame_norm_ten4_up1(pg.P, pg.g)},
                      {"dstar_P", stc::frame_norm(pg.dstar_P_direct, pg.g)},
                      {"pi1", dec.n1},
                      {"pi2", dec.n2},
                      {"pi3", dec.n3}};
        j["residual_norms"] = {{"sym", stc::frame_norm(rs.r_sym, pg.g)},
                               {"codazzi", stc::frame_norm(rs.r_codazzi, pg.g)},
                               {"omega3", stc::frame_norm(rs.r_omega3, pg.g)},
                               {"ds", stc::frame_norm(rs.r_ds, pg.g)},
                               {"r23", stc::frame_norm(rs.r_23, pg.g)},
                               {"r13", stc::frame_norm(rs.r_13, pg.g)},
                               {"dstar_W",
                                stc::frame_norm(stc::dstar_conformal(pg.nabla_Ric, pg.ds, pg.g),
                                                pg.g)}};
        write_output(j.dump(2) + "\n", out_path);
        return kExitOk;
    }

    std::ostringstream os;
    os << "metric: " << spec.name << " at point (" << stc::detail::num6(x[0]) << ", "
       << stc::detail::num6(x[1]) << ", " << stc::detail::num6(x[2]) << ", "
       << stc::detail::num6(x[3]) << ")\n\n";
    stc::print_matrix(os, "g", pg.g);
    stc::print_matrix(os, "g_inv", pg.g_inv);
    stc::print_matrix(os, "Ric", pg.Ric);
    stc::print_matrix(os, "T", pg.T);
    os << "s: " << stc::detail::num6(pg.s) << "\n";
    os << "ds: (" << stc::detail::num6(pg.ds[0]) << ", " << stc::detail::num6(pg.ds[1]) << ", "
       << stc::detail::num6(pg.ds[2]) << ", " << stc::detail::num6(pg.ds[3]) << ")\n\n";
    os << "nonzero Christoffel symbols (upper; lower pair):\n";
    bool any = false;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int l = i; l < 4; ++l)
                if (pg.Gamma[k][i][l] != 0.0) {
                    os << "  [" << k << "; " << i << " " << l
                       << "] = " << stc::detail::num6(pg.Gamma[k][i][l]) << "\n";
                    any = true;
                }
    if (!any) os << "  (none)\n";
    os << "\nnabla T (slices along the derivative index):\n";
    for (int k = 0; k < 4; ++k) {
        os << "  [" << k << "]\n";
        for (int i = 0; i < 4; ++i) {
            os << "   ";
            for (int l = 0; l < 4; ++l) os << std::setw(13) << stc::detail::num6(pg.nabla_T[k][i][l]);
            os << "\n";
        }
    }
    os << "\nframe norms:\n";
    os << "  |Ric| = " << stc::detail::num6(stc::frame_norm(pg.Ric, pg.g)) << "\n";
    os << "  |nabla_T| = " << stc::detail::num6(stc::frame_norm(pg.nabla_T, pg.g)) << "\n";
    os << "  |P| = " << stc::detail::num6(stc::frame_norm_ten4_up1(pg.P, pg.g)) << "\n";
    os << "  |pi1|, |pi2|, |pi3| = " << stc::detail::num6(dec.n1) << ", "
       << stc::detail::num6(dec.n2) << ", " << stc::detail::num6(dec.n3) << "\n";
    os << "residual norms: sym " << stc::detail::num6(stc::frame_norm(rs.r_sym, pg.g))
       << ", codazzi " << stc::detail::num6(stc::frame_norm(rs.r_codazzi, pg.g)) << ", omega3 "
       << stc::detail::num6(stc::frame_norm(rs.r_omega3, pg.g)) << ", ds "
       << stc::detail::num6(stc::frame_norm(rs.r_ds, pg.g)) << ", r23 "
       << stc::detail::num6(stc::frame_norm(rs.r_23, pg.g)) << ", r13 "
       << stc::detail::num6(stc::frame_norm(rs.r_13, pg.g)) << "\n";
    write_output(os.str(), out_path);
    return kExitOk;
}

int cmd_geodesic(const MetricOptions& mopt, const std::string& x0_text, const std::string& v0_text,
                 double h, int steps, const std::string& integral, const std::string& format,
                 const std::string& out_path) {
    const stc::MetricSpec spec = mopt.resolve();
    const stc::Vec4 x0 = parse_point(x0_text);
    const stc::Vec4 v0 = parse_point(v0_text);
    stc::IntegralField field;
    if (integral == "g")
        field = stc::IntegralField::Metric;
    else if (integral == "ric")
        field = stc::IntegralField::Ricci;
    else
        throw stc::metric_error("--integral must be 'g' or 'ric'");
    const auto traj = stc::integrate_geodesic(spec, x0, v0, h, steps);
    const auto rep = stc::quadratic_integral_drift(spec, traj, field);
    const auto& last = traj.back();
    if (format == "json") {
        json j{{"metric", spec.name},
               {"integral", integral},
               {"q0", rep.q0},
               {"max_drift", rep.max_drift},
               {"steps", rep.steps},
               {"step_size", rep.step_size},
               {"final_point", {last.x[0], last.x[1], last.x[2], last.x[3]}},
               {"final_velocity", {last.v[0], last.v[1], last.v[2], last.v[3]}}};
        write_output(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream os;
        os << "metric: " << spec.name << ", integral: " << integral << "\n";
        os << "initial value: " << stc::detail::num6(rep.q0) << "\n";
        os << "max drift over " << rep.steps << " steps (h = " << stc::detail::num6(rep.step_size)
           << "): " << stc::detail::num6(rep.max_drift) << "\n";
        os << "final point: (" << stc::detail::num6(last.x[0]) << ", "
           << stc::detail::num6(last.x[1]) << ", " << stc::detail::num6(last.x[2]) << ", "
           << stc::detail::num6(last.x[3]) << ")\n";
        write_output(os.str(), out_path);
    }
    return kExitOk;
}

int cmd_decompose(const std::string& tensor_file, const MetricOptions& mopt,
                  const std::string& point_text, const std::string& format,
                  const std::string& out_path) {
    std::ifstream in(tensor_file);
    if (!in) throw stc::metric_error("cannot open tensor file '" + tensor_file + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw stc::metric_error(std::string("tensor file is not valid JSON: ") + e.what());
    }

    MetricOptions m = mopt;
    if (m.name.empty() && m.file.empty() && j.contains("metric"))
        m.name = j.at("metric").get<std::string>();
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items())
            m.params.push_back(k + "=" + (v.is_string() ? v.get<std::string>() : json(v).dump()));
    const stc::MetricSpec spec = m.resolve();

    stc::Vec4 x{};
    if (!point_text.empty()) {
        x = parse_point(point_text);
    } else if (j.contains("point")) {
        for (int i = 0; i < 4; ++i)
            x[static_cast<std::size_t>(i)] = j.at("point").at(static_cast<std::size_t>(i)).get<double>();
    } else {
        for (int i = 0; i < 4; ++i) {
            const auto& iv = spec.domain[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] = 0.5 * (iv.lo + iv.hi);
        }
    }

    if (!j.contains("components") || !j.at("components").is_array() ||
        j.at("components").size() != 64)
        throw stc::metric_error("tensor file needs a 'components' array of 64 numbers");
    stc::Ten3 w{};
    {
        int n = 0;
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int l = 0; l < 4; ++l)
                    w[k][i][l] = j.at("components").at(static_cast<std::size_t>(n++)).get<double>();
    }

    const stc::Mat4 g = spec.value_matrix(x);
    stc::check_lorentz_signature(g, "at the decomposition point");
    const stc::Mat4 ginv = stc::mat4_inverse(g);
    const stc::Decomposition dec = stc::project(w, g, ginv); // throws membership_error

    double completeness = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int l = 0; l < 4; ++l)
                completeness =
                    std::max(completeness, std::abs(dec.pi1[k][i][l] + dec.pi2[k][i][l] +
                                                    dec.pi3[k][i][l] - w[k][i][l]));

    if (format == "json") {
        const auto ten = [](const stc::Ten3& t) {
            json flat = json::array();
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i)
                    for (int l = 0; l < 4; ++l) flat.push_back(t[k][i][l]);
            return flat;
        };
        json out{{"metric", spec.name},
                 {"point", {x[0], x[1], x[2], x[3]}},
                 {"trace_vector", {dec.theta[0], dec.theta[1], dec.theta[2], dec.theta[3]}},
                 {"norms",
                  {{"input", dec.n_input}, {"pi1", dec.n1}, {"pi2", dec.n2}, {"pi3", dec.n3}}},
                 {"completeness_residual", completeness},
                 {"pi1", ten(dec.pi1)},
                 {"pi2", ten(dec.pi2)},
                 {"pi3", ten(dec.pi3)}};
        write_output(out.dump(2) + "\n", out_path);
    } else {
        std::ostringstream os;
        os << "metric: " << spec.name << " at point (" << stc::detail::num6(x[0]) << ", "
           << stc::detail::num6(x[1]) << ", " << stc::detail::num6(x[2]) << ", "
           << stc::detail::num6(x[3]) << ")\n";
        os << "free trace t_k: (" << stc::detail::num6(dec.theta[0]) << ", "
           << stc::detail::num6(dec.theta[1]) << ", " << stc::detail::num6(dec.theta[2]) << ", "
           << stc::detail::num6(dec.theta[3]) << ")\n";
        os << "|input| = " << stc::detail::num6(dec.n_input) << "\n";
        os << "|pi1| = " << stc::detail::num6(dec.n1) << "  (trace-free, symmetrization-free)\n";
        os << "|pi2| = " << stc::detail::num6(dec.n2) << "  (totally symmetric, trace-free)\n";
        os << "|pi3| = " << stc::detail::num6(dec.n3) << "  (pure trace form)\n";
        os << "completeness residual: " << stc::detail::num6(completeness) << "\n";
        const auto print_ten = [&](const char* name, const stc::Ten3& t) {
            os << "\n" << name << " (slices along the first index):\n";
            for (int k = 0; k < 4; ++k) {
                os << "  [" << k << "]\n";
                for (int i = 0; i < 4; ++i) {
                    os << "   ";
                    for (int l = 0; l < 4; ++l) os << std::setw(13) << stc::detail::num6(t[k][i][l]);
                    os << "\n";
                }
            }
        };
        print_ten("pi1", dec.pi1);
        print_ten("pi2", dec.pi2);
        print_ten("pi3", dec.pi3);
        write_output(os.str(), out_path);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature classification of four-dimensional Lorentzian metrics"};
    app.set_version_flag("--version", stc::kEngineVersion);
    app.set_config("--config", "", "read option defaults from a TOML/INI file; flags win");
    app.require_subcommand(1);

    std::string format = "table";
    std::string out_path;
    app.add_option("--format", format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    app.add_option("--out", out_path, "write output to a file instead of stdout");

    // catalog
    auto* cat = app.add_subcommand("catalog", "catalog operations");
    cat->fallthrough();
    auto* cat_list = cat->add_subcommand("list", "list available catalog metrics");
    cat_list->fallthrough();
    cat->require_subcommand(1);

    // classify
    auto* cls = app.add_subcommand("classify", "classify the field equations over a sample region");
    cls->fallthrough();
    MetricOptions cls_m;
    cls_m.attach(cls);
    std::string grid = "default", points_text;
    stc::Tolerances tol;
    cls->add_option("--grid", grid, "per-axis counts like 3x3x3x3, or 'default'");
    cls->add_option("--points", points_text, "explicit points 't,x,y,z; t,x,y,z; ...'");
    cls->add_option("--tol-rel", tol.rel, "relative vanishing tolerance");
    cls->add_option("--tol-floor", tol.floor, "absolute floor under which nabla T is parallel");
    cls->add_option("--identity-tol", tol.identity, "engine self-check tolerance");

    // components
    auto* cmp = app.add_subcommand("components", "dump pointwise geometry");
    cmp->fallthrough();
    MetricOptions cmp_m;
    cmp_m.attach(cmp);
    std::string cmp_point = "0,0,0,0";
    cmp->add_option("--point", cmp_point, "event t,x,y,z")->required();

    // geodesic
    auto* geo = app.add_subcommand("geodesic", "integrate a geodesic and track a quadratic form");
    geo->fallthrough();
    MetricOptions geo_m;
    geo_m.attach(geo);
    std::string geo_x0, geo_v0, geo_integral = "g";
    double geo_h = 1e-3;
    int geo_n = 1000;
    geo->add_option("--x0", geo_x0, "initial event t,x,y,z")->required();
    geo->add_option("--v0", geo_v0, "initial velocity components")->required();
    geo->add_option("--step", geo_h, "step size");
    geo->add_option("--steps", geo_n, "number of steps");
    geo->add_option("--integral", geo_integral, "conserved form to track: g or ric");

    // decompose
    auto* dec = app.add_subcommand("decompose", "decompose a tensor fixture into the three slices");
    dec->fallthrough();
    MetricOptions dec_m;
    dec_m.attach(dec);
    std::string dec_file, dec_point;
    dec->add_option("--tensor-file", dec_file, "JSON fixture with 64 components")->required();
    dec->add_option("--point", dec_point, "evaluation event t,x,y,z");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cat_list->parsed()) return cmd_catalog_list(format);
        if (cls->parsed()) return cmd_classify(cls_m, grid, points_text, tol, format, out_path);
        if (cmp->parsed()) return cmd_components(cmp_m, cmp_point, format, out_path);
        if (geo->parsed())
            return cmd_geodesic(geo_m, geo_x0, geo_v0, geo_h, geo_n, geo_integral, format, out_path);
        if (dec->parsed()) return cmd_decompose(dec_file, dec_m, dec_point, format, out_path);
        std::cerr << app.help() << "\n";
        return kExitInput;
    } catch (const stc::membership_error& e) {
        print_error_json("membership", e.what());
        return kExitInput;
    } catch (const stc::parse_error& e) {
        print_error_json("parse",
                         std::string(e.what()) + " (offset " + std::to_string(e.offset) + ")");
        return kExitInput;
    } catch (const stc::error& e) {
        print_error_json("input", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return kExitInput;
    }
}
