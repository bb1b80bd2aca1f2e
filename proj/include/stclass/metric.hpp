#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stclass/expr.hpp"
#include "stclass/jet.hpp"
#include "stclass/linalg.hpp"

namespace stc {

struct Interval {
    double lo = -1.0, hi = 1.0;
    double width() const { return hi - lo; }
    bool contains(double x) const {
        const double slack = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
        return x >= lo - slack && x <= hi + slack;
    }
};

/// A chart plus the 10 independent components of a symmetric metric with
/// Lorentz signature (-+++). Components are expression trees over the chart
/// coordinates and the declared parameters; absent components are zero.
struct MetricSpec {
    std::string name;
    std::string description;
    std::array<std::string, 4> coord_names{"x0", "x1", "x2", "x3"};
    std::array<std::array<ExprPtr, 4>, 4> comp{}; // comp[i][j] == comp[j][i]
    ParamMap params;
    std::array<Interval, 4> domain;

    SymbolTable symbols() const {
        SymbolTable t;
        t.coord_names = coord_names;
        for (const auto& [k, v] : params) t.param_names.push_back(k);
        return t;
    }

    void set_component(int i, int j, ExprPtr e) {
        comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
        comp[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = std::move(e);
    }

    bool in_domain(const Vec4& x) const {
        for (int i = 0; i < 4; ++i)
            if (!domain[static_cast<std::size_t>(i)].contains(x[static_cast<std::size_t>(i)]))
                return false;
        return true;
    }

    Mat4 value_matrix(const Vec4& x) const {
        Mat4 g{};
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                const auto& e = comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                const double v = e ? eval_real(e, x, params) : 0.0;
                g[i][j] = v;
                g[j][i] = v;
            }
        return g;
    }
};

/// Throws unless the symmetric value matrix has exactly one negative
/// eigenvalue and none within 1e-10 of zero.
inline void check_lorentz_signature(const Mat4& g, const std::string& where) {
    const auto ev = symmetric_eigenvalues4(g);
    int negatives = 0;
    for (const double l : ev) {
        if (std::abs(l) < 1e-10)
            throw metric_error("metric degenerate " + where + " (eigenvalue " +
                               std::to_string(l) + " within 1e-10 of zero)");
        if (l < 0.0) ++negatives;
    }
    if (negatives != 1)
        throw metric_error("metric signature violation " + where +
                           ": expected one negative eigenvalue, found " +
                           std::to_string(negatives));
}

/// All ten components evaluated as order-3 jets at a point inside the domain
/// box; the value matrix is signature-checked.
inline JetMat4 metric_jets(const MetricSpec& spec, const Vec4& x) {
    if (!spec.in_domain(x)) {
        std::ostringstream os;
        os << "point (" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3]
           << ") outside the domain box of metric '" << spec.name << "'";
        throw metric_error(os.str());
    }
    JetMat4 g{};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const auto& e = spec.comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const Jet3 jet = e ? eval_jet(e, x, spec.params) : Jet3();
            g[i][j] = jet;
            g[j][i] = jet;
        }
    Mat4 values{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) values[i][j] = g[i][j].value();
    check_lorentz_signature(values, "at the evaluation point");
    return g;
}

/// Explicit list of sample events, kept in lexicographic order.
struct SamplePlan {
    std::vector<Vec4> points;

    static SamplePlan from_points(std::vector<Vec4> pts) { return SamplePlan{std::move(pts)}; }

    /// Uniform grid of count[i] points per axis spanning the domain box
    /// shrunk 10% from each boundary.
    static SamplePlan grid(const MetricSpec& spec, const std::array<int, 4>& count) {
        std::array<std::vector<double>, 4> axis;
        for (int i = 0; i < 4; ++i) {
            const Interval& iv = spec.domain[static_cast<std::size_t>(i)];
            const double lo = iv.lo + 0.1 * iv.width();
            const double hi = iv.hi - 0.1 * iv.width();
            const int n = count[static_cast<std::size_t>(i)];
            if (n < 1) throw metric_error("grid count must be at least 1");
            auto& v = axis[static_cast<std::size_t>(i)];
            if (n == 1) {
                v.push_back(0.5 * (lo + hi));
            } else {
                for (int k = 0; k < n; ++k)
                    v.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
            }
        }
        SamplePlan plan;
        for (double a : axis[0])
            for (double b : axis[1])
                for (double c : axis[2])
                    for (double d : axis[3]) plan.points.push_back({a, b, c, d});
        return plan;
    }

    static SamplePlan default_grid(const MetricSpec& spec) { return grid(spec, {3, 3, 3, 3}); }
};

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

namespace detail {

inline ExprPtr parse_component(const std::string& text, const MetricSpec& spec) {
    return parse(text, spec.symbols());
}

inline double uniform01(std::mt19937& gen) {
    return static_cast<double>(gen()) * (1.0 / 4294967296.0);
}

} // namespace detail

inline MetricSpec make_minkowski() {
    MetricSpec m;
    m.name = "minkowski";
    m.description = "flat spacetime, inertial chart";
    m.coord_names = {"t", "x", "y", "z"};
    m.domain = {Interval{-5, 5}, Interval{-5, 5}, Interval{-5, 5}, Interval{-5, 5}};
    m.set_component(0, 0, detail::parse_component("-1", m));
    m.set_component(1, 1, detail::parse_component("1", m));
    m.set_component(2, 2, detail::parse_component("1", m));
    m.set_component(3, 3, detail::parse_component("1", m));
    return m;
}

inline MetricSpec make_schwarzschild(double mass) {
    if (!(mass > 0.0)) throw metric_error("schwarzschild: mass parameter m must be positive");
    MetricSpec m;
    m.name = "schwarzschild";
    m.description = "exterior vacuum chart, r in [3m, 50m]";
    m.coord_names = {"t", "r", "theta", "phi"};
    m.params["m"] = mass;
    // t and phi are symmetry directions; the wide box lets orbits run for
    // full periods while the r and theta bounds keep clear of the horizon
    // and the axis
    m.domain = {Interval{-250, 250}, Interval{3 * mass, 50 * mass}, Interval{0.4, 2.7},
                Interval{-250, 250}};
    m.set_component(0, 0, detail::parse_component("-(1 - 2*m/r)", m));
    m.set_component(1, 1, detail::parse_component("1/(1 - 2*m/r)", m));
    m.set_component(2, 2, detail::parse_component("r^2", m));
    m.set_component(3, 3, detail::parse_component("r^2*sin(theta)^2", m));
    return m;
}

inline MetricSpec make_de_sitter_flat(double hubble) {
    if (!(hubble > 0.0)) throw metric_error("de_sitter_flat: H must be positive");
    MetricSpec m;
    m.name = "de_sitter_flat";
    m.description = "exponentially expanding flat slicing";
    m.coord_names = {"t", "x", "y", "z"};
    m.params["H"] = hubble;
    // the time box scales with the expansion time 1/H so component values
    // stay within a few e-folds at any H
    m.domain = {Interval{-1.0 / hubble, 1.0 / hubble}, Interval{-5, 5}, Interval{-5, 5},
                Interval{-5, 5}};
    m.set_component(0, 0, detail::parse_component("-1", m));
    for (int a = 1; a < 4; ++a) m.set_component(a, a, detail::parse_component("exp(2*H*t)", m));
    return m;
}

/// Spatially flat Robertson-Walker form with a caller-supplied scale factor
/// a(t) > 0 on t in [0.5, 2].
inline MetricSpec make_flrw(const std::string& scale_factor_expr) {
    MetricSpec m;
    m.name = "flrw";
    m.description = "flat-slicing cosmology, scale factor a(t) = " + scale_factor_expr;
    m.coord_names = {"t", "x", "y", "z"};
    m.domain = {Interval{0.5, 2}, Interval{-5, 5}, Interval{-5, 5}, Interval{-5, 5}};
    const std::string a = "(" + scale_factor_expr + ")";
    m.set_component(0, 0, detail::parse_component("-1", m));
    for (int sp = 1; sp < 4; ++sp) m.set_component(sp, sp, detail::parse_component(a + "^2", m));
    return m;
}

inline MetricSpec make_einstein_static(double radius) {
    if (!(radius > 0.0)) throw metric_error("einstein_static: radius a must be positive");
    MetricSpec m;
    m.name = "einstein_static";
    m.description = "static cylinder R x S^3";
    m.coord_names = {"t", "chi", "theta", "phi"};
    m.params["a"] = radius;
    m.domain = {Interval{-50, 50}, Interval{0.4, 2.7}, Interval{0.4, 2.7}, Interval{-50, 50}};
    m.set_component(0, 0, detail::parse_component("-1", m));
    m.set_component(1, 1, detail::parse_component("a^2", m));
    m.set_component(2, 2, detail::parse_component("a^2*sin(chi)^2", m));
    m.set_component(3, 3, detail::parse_component("a^2*sin(chi)^2*sin(theta)^2", m));
    return m;
}

/// exp(2*phi) times the flat metric, phi an arbitrary expression in the
/// inertial chart.
inline MetricSpec make_conformally_flat(const std::string& phi_expr) {
    MetricSpec m;
    m.name = "conformally_flat";
    m.description = "conformal factor exp(2*(" + phi_expr + ")) on flat spacetime";
    m.coord_names = {"t", "x", "y", "z"};
    m.domain = {Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}};
    const std::string f = "exp(2*(" + phi_expr + "))";
    m.set_component(0, 0, detail::parse_component("-" + f, m));
    for (int a = 1; a < 4; ++a) m.set_component(a, a, detail::parse_component(f, m));
    return m;
}

/// Warped product: g00(x0) dx0^2 + f(x0) * g_ab(x1,x2,x3) dx^a dx^b.
/// `spatial[a][b]` indexes the spatial block with a,b in 0..2.
inline MetricSpec make_sinyukov_warped(const std::string& g00_expr, const std::string& warp_expr,
                                       const std::array<std::array<std::string, 3>, 3>& spatial) {
    MetricSpec m;
    m.name = "sinyukov_warped";
    m.description = "time-warped product metric";
    m.coord_names = {"x0", "x1", "x2", "x3"};
    m.domain = {Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}};
    m.set_component(0, 0, detail::parse_component(g00_expr, m));
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            const std::string& s = spatial[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (s.empty() || s == "0") continue;
            m.set_component(a + 1, b + 1,
                            detail::parse_component("(" + warp_expr + ")*(" + s + ")", m));
        }
    return m;
}

/// Flat metric plus eps times a deterministic band-limited perturbation
/// (two sinusoids per component, wave vectors in {-2..2}^4).
inline MetricSpec make_perturbed_minkowski(double eps, std::uint32_t seed) {
    MetricSpec m;
    m.name = "perturbed_minkowski";
    m.description = "randomly perturbed flat metric";
    m.coord_names = {"t", "x", "y", "z"};
    m.domain = {Interval{-0.5, 0.5}, Interval{-0.5, 0.5}, Interval{-0.5, 0.5},
                Interval{-0.5, 0.5}};
    std::mt19937 gen(seed);
    const char* coords[4] = {"t", "x", "y", "z"};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            std::ostringstream os;
            os.precision(17);
            os << (i == j ? (i == 0 ? "-1" : "1") : "0");
            for (int wave = 0; wave < 2; ++wave) {
                const double amp = 0.5 + 0.5 * detail::uniform01(gen);
                const double phase = 6.283185307179586 * detail::uniform01(gen);
                int k[4];
                bool all_zero = true;
                for (int c = 0; c < 4; ++c) {
                    k[c] = static_cast<int>(gen() % 5) - 2;
                    if (k[c] != 0) all_zero = false;
                }
                if (all_zero) k[(i + j) % 4] = 1;
                os << " + " << eps * amp << "*sin(" << phase;
                for (int c = 0; c < 4; ++c)
                    if (k[c] != 0) os << " + " << k[c] << "*" << coords[c];
                os << ")";
            }
            m.set_component(i, j, detail::parse_component(os.str(), m));
        }
    return m;
}

struct CatalogEntry {
    std::string name;
    std::string parameters; // human-readable parameter summary
    std::string brief;
};

inline std::vector<CatalogEntry> catalog_entries() {
    return {
        {"minkowski", "", "flat spacetime"},
        {"schwarzschild", "m=1", "exterior vacuum solution"},
        {"de_sitter_flat", "H=1", "constant-curvature expanding universe"},
        {"flrw", "a=1 + 0.2*t^2 (expression)", "flat Robertson-Walker cosmology"},
        {"einstein_static", "a=1", "static R x S^3 universe"},
        {"conformally_flat", "phi=0.1*x + 0.05*y^2 (expression)", "exp(2*phi) times flat"},
        {"sinyukov_warped", "g00=-1, f=exp(2*x0), spatial=identity (expressions)",
         "time-warped product metric"},
        {"perturbed_minkowski", "eps=0.01, seed=1", "generic small perturbation of flat"},
    };
}

/// Builds a catalog metric from name plus raw string arguments (numbers or
/// expressions, as each entry requires).
inline MetricSpec catalog(const std::string& name,
                          const std::map<std::string, std::string>& args = {}) {
    const auto get = [&](const char* key, const char* fallback) -> std::string {
        const auto it = args.find(key);
        return it == args.end() ? fallback : it->second;
    };
    const auto get_num = [&](const char* key, double fallback) -> double {
        const auto it = args.find(key);
        if (it == args.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(it->second);
            return v;
        } catch (const std::exception&) {
            throw metric_error(std::string("catalog parameter '") + key +
                               "' must be a number, got '" + it->second + "'");
        }
    };

    if (name == "minkowski") return make_minkowski();
    if (name == "schwarzschild") return make_schwarzschild(get_num("m", 1.0));
    if (name == "de_sitter_flat") return make_de_sitter_flat(get_num("H", 1.0));
    if (name == "flrw") return make_flrw(get("a", "1 + 0.2*t^2"));
    if (name == "einstein_static") return make_einstein_static(get_num("a", 1.0));
    if (name == "conformally_flat") return make_conformally_flat(get("phi", "0.1*x + 0.05*y^2"));
    if (name == "sinyukov_warped") {
        std::array<std::array<std::string, 3>, 3> spatial{};
        for (int a = 0; a < 3; ++a) spatial[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = "1";
        const auto it = args.find("spatial");
        if (it != args.end()) {
            // six semicolon-separated expressions: 11;12;13;22;23;33
            std::array<std::string, 6> parts;
            std::size_t pos = 0;
            for (int k = 0; k < 6; ++k) {
                const std::size_t next = it->second.find(';', pos);
                parts[static_cast<std::size_t>(k)] =
                    it->second.substr(pos, next == std::string::npos ? next : next - pos);
                if (next == std::string::npos) {
                    if (k != 5)
                        throw metric_error("sinyukov_warped: 'spatial' needs six "
                                           "semicolon-separated expressions (11;12;13;22;23;33)");
                    break;
                }
                pos = next + 1;
            }
            int k = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b) {
                    spatial[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = parts[static_cast<std::size_t>(k)];
                    spatial[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = parts[static_cast<std::size_t>(k)];
                    ++k;
                }
        }
        return make_sinyukov_warped(get("g00", "-1"), get("f", "exp(2*x0)"), spatial);
    }
    if (name == "perturbed_minkowski")
        return make_perturbed_minkowski(get_num("eps", 0.01),
                                        static_cast<std::uint32_t>(get_num("seed", 1.0)));
    throw metric_error("unknown catalog metric '" + name + "'");
}

// ---------------------------------------------------------------------------
// metric file format
// ---------------------------------------------------------------------------
//
//   # comment lines and blank lines are ignored
//   name = schwarzschild
//   description = free text
//   coords = t, r, theta, phi
//   param m = 1
//   domain r = 3 50
//   g[0][0] = -(1 - 2*m/r)
//
// Omitted components are zero; omitted domains default to [-1, 1]. The
// signature is validated at the center of the domain box.

inline MetricSpec load_metric(const std::string& content) {
    MetricSpec m;
    m.name = "unnamed";
    bool have_component = false;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::tuple<int, int, std::string, std::size_t>> pending; // components
    const auto fail = [&](const std::string& msg) {
        throw metric_error("metric file line " + std::to_string(line_no) + ": " + msg);
    };
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            m.name = value;
        } else if (key == "description") {
            m.description = value;
        } else if (key == "coords") {
            std::array<std::string, 4> names;
            std::string token;
            int n = 0;
            for (std::size_t i = 0; i <= value.size(); ++i) {
                const char c = i < value.size() ? value[i] : ',';
                if (c == ',' || c == ' ' || c == '\t') {
                    if (!token.empty()) {
                        if (n >= 4) fail("more than four coordinate names");
                        names[static_cast<std::size_t>(n++)] = token;
                        token.clear();
                    }
                } else {
                    token += c;
                }
            }
            if (n != 4) fail("expected four coordinate names");
            m.coord_names = names;
        } else if (key.rfind("param ", 0) == 0) {
            const std::string pname = trim(key.substr(6));
            if (pname.empty()) fail("missing parameter name");
            try {
                m.params[pname] = std::stod(value);
            } catch (const std::exception&) {
                fail("parameter value '" + value + "' is not a number");
            }
        } else if (key.rfind("domain ", 0) == 0) {
            const std::string cname = trim(key.substr(7));
            int axis = -1;
            for (int i = 0; i < 4; ++i)
                if (m.coord_names[static_cast<std::size_t>(i)] == cname ||
                    ("x" + std::to_string(i)) == cname)
                    axis = i;
            if (axis < 0) fail("domain names unknown coordinate '" + cname + "'");
            std::istringstream vs(value);
            Interval iv;
            if (!(vs >> iv.lo >> iv.hi) || !(iv.lo < iv.hi))
                fail("domain needs 'lo hi' with lo < hi");
            m.domain[static_cast<std::size_t>(axis)] = iv;
        } else if (key.size() >= 7 && key.rfind("g[", 0) == 0) {
            // g[i][j]
            if (key.size() != 7 || key[3] != ']' || key[4] != '[' || key[6] != ']')
                fail("component key must look like g[i][j]");
            const int i = key[2] - '0';
            const int j = key[5] - '0';
            if (i < 0 || i > 3 || j < 0 || j > 3) fail("component indices must be 0..3");
            pending.emplace_back(i, j, value, line_no);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    for (const auto& [i, j, text, ln] : pending) {
        line_no = ln;
        try {
            m.set_component(i, j, parse(text, m.symbols()));
        } catch (const parse_error& pe) {
            fail(std::string(pe.what()) + " (column " + std::to_string(pe.offset + 1) + ")");
        }
        have_component = true;
    }
    if (!have_component) throw metric_error("metric file declares no components");
    Vec4 center;
    for (int i = 0; i < 4; ++i) {
        const Interval& iv = m.domain[static_cast<std::size_t>(i)];
        center[static_cast<std::size_t>(i)] = 0.5 * (iv.lo + iv.hi);
    }
    check_lorentz_signature(m.value_matrix(center), "at the domain-box center");
    return m;
}

inline std::string save_metric(const MetricSpec& m) {
    std::ostringstream os;
    os.precision(17);
    os << "name = " << m.name << "\n";
    if (!m.description.empty()) os << "description = " << m.description << "\n";
    os << "coords = " << m.coord_names[0] << ", " << m.coord_names[1] << ", " << m.coord_names[2]
       << ", " << m.coord_names[3] << "\n";
    for (const auto& [k, v] : m.params) os << "param " << k << " = " << v << "\n";
    for (int i = 0; i < 4; ++i)
        os << "domain " << m.coord_names[static_cast<std::size_t>(i)] << " = "
           << m.domain[static_cast<std::size_t>(i)].lo << " "
           << m.domain[static_cast<std::size_t>(i)].hi << "\n";
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const auto& e = m.comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!e) continue;
            os << "g[" << i << "][" << j << "] = " << to_string(e) << "\n";
        }
    return os.str();
}

} // namespace stc
