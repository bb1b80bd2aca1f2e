// End-to-end tests of the command-line binary: exit-code contract, JSON
// round-trips, verdicts, error objects on stderr.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "stclass/report_io.hpp"

#ifndef STCLASS_BIN
#error "STCLASS_BIN must point at the built binary"
#endif
#ifndef STCLASS_FIXTURES
#error "STCLASS_FIXTURES must point at the fixtures directory"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = true) {
    const std::string cmd =
        std::string(STCLASS_BIN) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) { return std::string(STCLASS_FIXTURES) + "/" + name; }

using nlohmann::json;

} // namespace

TEST(CliTest, CatalogListShowsAllEntries) {
    const RunResult r = run("catalog list");
    EXPECT_EQ(r.exit_code, 0);
    for (const char* name : {"minkowski", "schwarzschild", "de_sitter_flat", "flrw",
                             "einstein_static", "conformally_flat", "sinyukov_warped",
                             "perturbed_minkowski"})
        EXPECT_NE(r.out.find(name), std::string::npos) << name;

    const RunResult js = run("catalog list --format json", false);
    EXPECT_EQ(js.exit_code, 0);
    EXPECT_EQ(json::parse(js.out).at("catalog").size(), 8u);
}

TEST(CliTest, ClassifyMinkowskiIsParallelAndFast) {
    const auto start = std::chrono::steady_clock::now();
    const RunResult r = run("classify --metric minkowski");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("aggregate verdict: PARALLEL"), std::string::npos);
    EXPECT_NE(r.out.find("T == 0"), std::string::npos);
    EXPECT_LT(secs, 1.0);
}

TEST(CliTest, NamedVerdictsThroughJson) {
    struct Case {
        const char* args;
        const char* verdict;
        bool t_zero;
    };
    const Case cases[] = {
        {"classify --metric de_sitter_flat --H 1 --grid 2x2x2x2 --format json", "PARALLEL", false},
        {"classify --metric schwarzschild --m 1 --grid 2x2x2x2 --format json", "PARALLEL", true},
        {"classify --metric conformally_flat --phi \"0.1*x1+0.05*x2^2\" --grid 2x2x2x2 "
         "--format json",
         "O23", false},
        {"classify --metric perturbed_minkowski --eps 0.01 --grid 2x2x2x2 --format json",
         "GENERIC", false},
    };
    for (const auto& c : cases) {
        const RunResult r = run(c.args, false);
        ASSERT_EQ(r.exit_code, 0) << c.args;
        const json j = json::parse(r.out);
        EXPECT_EQ(j.at("aggregate").at("verdict").get<std::string>(), c.verdict) << c.args;
        EXPECT_EQ(j.at("aggregate").at("T_zero").get<bool>(), c.t_zero) << c.args;
        EXPECT_TRUE(j.at("identity_ok").get<bool>());
    }
}

TEST(CliTest, JsonReportRoundTripsByteIdentically) {
    const RunResult r =
        run("classify --metric de_sitter_flat --grid 2x2x2x2 --format json", false);
    ASSERT_EQ(r.exit_code, 0);
    const json j = json::parse(r.out);
    const stc::ClassificationReport rep = stc::report_from_json(j);
    const std::string regenerated = stc::to_json(rep).dump(2) + "\n";
    EXPECT_EQ(regenerated, r.out);
}

TEST(CliTest, ComponentsDumpsKnownValues) {
    const RunResult ds = run("components --metric de_sitter_flat --H 1 --point \"0,0,0,0\"");
    EXPECT_EQ(ds.exit_code, 0);
    EXPECT_NE(ds.out.find("s: 12"), std::string::npos);

    const RunResult sch =
        run("components --metric schwarzschild --m 1 --point \"0,10,1.5707963267948966,0\" "
            "--format json",
            false);
    EXPECT_EQ(sch.exit_code, 0);
    const json j = json::parse(sch.out);
    EXPECT_LT(std::abs(j.at("s").get<double>()), 1e-9);
    EXPECT_LT(j.at("norms").at("Ric").get<double>(), 1e-9);
    EXPECT_NEAR(j.at("g").at(0).at(0).get<double>(), -0.8, 1e-12);
}

TEST(CliTest, GeodesicCommandReportsDrift) {
    const RunResult r = run("geodesic --metric minkowski --x0 \"0,0,0,0\" "
                            "--v0 \"1,0.5,0,0\" --step 0.01 --steps 100 --integral g --format json",
                            false);
    ASSERT_EQ(r.exit_code, 0);
    const json j = json::parse(r.out);
    EXPECT_NEAR(j.at("q0").get<double>(), -0.75, 1e-12);
    EXPECT_LT(j.at("max_drift").get<double>(), 1e-14);
    EXPECT_EQ(j.at("steps").get<int>(), 100);
}

TEST(CliTest, DecomposeFixtures) {
    const RunResult zero = run("decompose --tensor-file " + fixture("zero.json"));
    EXPECT_EQ(zero.exit_code, 0);
    EXPECT_NE(zero.out.find("|pi1| = 0"), std::string::npos);

    const RunResult member =
        run("decompose --tensor-file " + fixture("member_flat.json") + " --format json", false);
    ASSERT_EQ(member.exit_code, 0);
    const json j = json::parse(member.out);
    EXPECT_LT(j.at("completeness_residual").get<double>(), 1e-10);
    const double n = j.at("norms").at("input").get<double>();
    const double n1 = j.at("norms").at("pi1").get<double>();
    const double n2 = j.at("norms").at("pi2").get<double>();
    const double n3 = j.at("norms").at("pi3").get<double>();
    EXPECT_GT(n1, 0.1);
    EXPECT_GT(n2, 0.1);
    EXPECT_GT(n3, 0.1);
    EXPECT_GT(n + 1e-9, std::max({n1, n2, n3}));
}

TEST(CliTest, DecomposeRejectsNonMemberWithExplanation) {
    const RunResult r = run("decompose --tensor-file " + fixture("ricci_gradient_varying_s.json") +
                            " --phi \"0.1*x + 0.05*y^2\"");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.out.find("membership"), std::string::npos);
    EXPECT_NE(r.out.find("grad(s)/2"), std::string::npos);
}

TEST(CliTest, MetricFileFlow) {
    const RunResult r =
        run("classify --metric-file " + fixture("wave_conformal.metric") + " --grid 2x2x2x2");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("aggregate verdict: O2"), std::string::npos);
}

TEST(CliTest, ExitCodeTwoOnInputErrors) {
    EXPECT_EQ(run("classify --metric nonsuch").exit_code, 2);
    EXPECT_EQ(run("components --metric schwarzschild --point \"0,2,1.5,0\"").exit_code, 2);
    EXPECT_EQ(run("classify --metric schwarzschild --m -3").exit_code, 2);
    EXPECT_EQ(run("geodesic --metric minkowski --x0 \"0,0,0,0\" --v0 \"1,1,0,0\" "
                  "--step 0.1 --steps 1000")
                  .exit_code,
              2);
    EXPECT_EQ(run("decompose --tensor-file /nonexistent.json").exit_code, 2);
    // error payload is a JSON object on stderr
    const RunResult err = run("classify --metric nonsuch");
    EXPECT_NE(err.out.find("\"error\""), std::string::npos);
}

TEST(CliTest, ExitCodeThreeWhenIdentityCheckCannotPass) {
    // an impossible self-check tolerance forces the identity gate to fail,
    // which must preempt any verdict
    const RunResult r = run("classify --metric schwarzschild --identity-tol 1e-30");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.out.find("identity"), std::string::npos);
    EXPECT_EQ(r.out.find("aggregate verdict"), std::string::npos);
}

TEST(CliTest, OutFlagWritesFile) {
    const std::string path = "/tmp/stclass_test_report.json";
    std::remove(path.c_str());
    const RunResult r =
        run("classify --metric minkowski --grid 1x1x1x1 --format json --out " + path);
    EXPECT_EQ(r.exit_code, 0);
    std::ifstream in(path);
    ASSERT_TRUE(in.good());
    json j;
    in >> j;
    EXPECT_EQ(j.at("aggregate").at("verdict").get<std::string>(), "PARALLEL");
    std::remove(path.c_str());
}

TEST(CliTest, ExplicitPointsPlan) {
    const RunResult r = run("classify --metric de_sitter_flat "
                            "--points \"0,0,0,0; 0.5,1,1,1\" --format json",
                            false);
    ASSERT_EQ(r.exit_code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.at("points").size(), 2u);
    EXPECT_EQ(j.at("aggregate").at("verdict").get<std::string>(), "PARALLEL");
}

TEST(CliTest, VersionFlag) {
    const RunResult r = run("--version");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

TEST(CliTest, ConfigFileProvidesDefaultsAndFlagsWin) {
    const std::string path = "/tmp/stclass_test_config.toml";
    {
        std::ofstream cfg(path);
        cfg << "format = \"json\"\n";
    }
    const RunResult as_json = run("--config " + path + " classify --metric minkowski", false);
    EXPECT_EQ(as_json.exit_code, 0);
    EXPECT_NO_THROW(json::parse(as_json.out));
    const RunResult as_table =
        run("--config " + path + " --format table classify --metric minkowski", false);
    EXPECT_EQ(as_table.exit_code, 0);
    EXPECT_NE(as_table.out.find("aggregate verdict"), std::string::npos);
    std::remove(path.c_str());
}
