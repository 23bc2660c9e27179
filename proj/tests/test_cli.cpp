#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include "hardy/cli.hpp"
#include "json.hpp"

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "hardy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = hardy::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("hardy_test_" + name);
}

std::string strip_timing(const std::string& json) {
    auto j = nlohmann::ordered_json::parse(json);
    for (auto& r : j) r.erase("elapsed_s");
    return j.dump();
}

}  // namespace

TEST(Cli, NormOfTransformedIndicator) {
    const CliRun r = run({"norm", "L1w", "S(chi(0,1))"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1\n");
}

TEST(Cli, MeasureDyadicBlock) {
    const CliRun r = run({"measure", "Linf", "[4,8)"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "0.5\n");
}

TEST(Cli, EvalAndTheta) {
    EXPECT_EQ(run({"eval", "S(chi(0,1))", "4"}).out, "0.25\n");
    EXPECT_EQ(run({"theta", "sqrt", "4"}).out, "0.5\n");
}

TEST(Cli, TransformPrintsClosedForm) {
    const CliRun r = run({"transform", "chi(0,1)"});
    EXPECT_EQ(r.code, 0);
    const hardy::PiecewiseFn s = hardy::parse(r.out.substr(0, r.out.size() - 1));
    EXPECT_NEAR(s.eval(0.5), 1.0, 1e-12);
    EXPECT_NEAR(s.eval(4.0), 0.25, 1e-12);
}

TEST(Cli, MemberVerdictLines) {
    const CliRun a = run({"member", "Lp:2", "(1-t)^(-0.5) on (0,1)"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "NotIn");
    const CliRun b = run({"member", "--domain", "Lp:2", "(1-t)^(-0.5) on (0,1)"});
    EXPECT_EQ(b.out.substr(0, b.out.find('\n')), "In");
    EXPECT_NE(b.out.find("norm: "), std::string::npos);
    EXPECT_NE(b.out.find("evidence: "), std::string::npos);
}

TEST(Cli, ConditionsAndDomain) {
    const CliRun r = run({"conditions", "sqrt"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("phi-constant: holds"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("theta-condition: holds"), std::string::npos) << r.out;
    const CliRun d = run({"domain", "min1t"});
    EXPECT_EQ(d.out.substr(0, d.out.find('\n')), "fails");
}

TEST(Cli, ProbeListsNormsAndTrend) {
    const CliRun r = run({"probe", "Linf", "dyadic", "6"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("1 0.984375\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("trend: bounded-away-from-0"), std::string::npos);
}

TEST(Cli, ConstructSubcommands) {
    EXPECT_EQ(run({"construct", "falpha", "-0.5"}).code, 0);
    EXPECT_EQ(run({"construct", "l1linf"}).code, 0);
    EXPECT_EQ(run({"construct", "lpqwitness", "2", "2"}).code, 0);
    const CliRun n = run({"construct", "noesri", "Lp:2", "(1+t)^(-1) on (0,inf)", "--K", "5"});
    EXPECT_EQ(n.code, 0) << n.err;
    EXPECT_NE(n.out.find("t_5 = "), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"norm", "L1"}).code, 2);
    EXPECT_EQ(run({"norm", "Lq:2", "chi(0,1)"}).code, 2);
    EXPECT_EQ(run({"norm", "L1", "chi(0,"}).code, 2);
    EXPECT_EQ(run({"eval", "chi(0,1)", "-1"}).code, 2);
    EXPECT_EQ(run({"measure", "Linf", "[0,1)"}).code, 2);
    EXPECT_EQ(run({"construct", "falpha", "0.5"}).code, 2);
    EXPECT_EQ(run({"verify", "--filter", "Z9"}).code, 2);
    EXPECT_EQ(run({"--tol", "-1", "norm", "L1", "chi(0,1)"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, VerifyJsonIsDeterministic) {
    const CliRun a = run({"verify", "--json", "--filter", "A03"});
    const CliRun b = run({"verify", "--json", "--filter", "A03"});
    ASSERT_EQ(a.code, 0) << a.out;
    const auto j = nlohmann::json::parse(a.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["id"], "A03");
    EXPECT_EQ(j[0]["anchor"], "hardy-closed-forms");
    EXPECT_EQ(j[0]["status"], "pass");
    for (const char* k : {"lhs", "rhs", "tol"}) EXPECT_TRUE(j[0].contains(k)) << k;
    EXPECT_EQ(strip_timing(a.out), strip_timing(b.out));
}

TEST(Cli, VerifyCsvHeader) {
    const CliRun r = run({"verify", "--csv", "--filter", "A05"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "id,anchor,status,lhs,rhs,tol");
    EXPECT_NE(r.out.find("A05,theta-power-exactness,pass,"), std::string::npos) << r.out;
}

TEST(Cli, VerifyFailureExitsOne) {
    const CliRun r = run({"verify", "--filter", "A08b"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, PlotDataWritesTwoColumns) {
    const auto path = temp_file("plot.csv");
    const CliRun r = run({"plot-data", "A07", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,y");
    int rows = 0;
    const std::regex row(R"([^,]+,[^,]+)");
    while (std::getline(in, line)) {
        EXPECT_TRUE(std::regex_match(line, row)) << line;
        ++rows;
    }
    EXPECT_GT(rows, 10);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"plot-data", "Z1", "--out", path.string()}).code, 2);
}

TEST(Settings, Precedence) {
    using hardy::cli::resolve_settings;
    EXPECT_EQ(resolve_settings(nullptr, "", {}, {}).tol, 1e-9);
    EXPECT_EQ(resolve_settings("1e-7", "", {}, {}).tol, 1e-7);
    const auto path = temp_file("config.toml");
    {
        std::ofstream f(path);
        f << "# tolerances\n[numerics]\ntol = 1e-6\ngrid = 101  # points\nseed = \"7\"\n";
    }
    const auto c = resolve_settings("1e-7", path.string(), {}, {});
    EXPECT_EQ(c.tol, 1e-6);
    EXPECT_EQ(c.grid, 101);
    EXPECT_EQ(c.seed, 7u);
    const auto f = resolve_settings("1e-7", path.string(), 1e-5, 51);
    EXPECT_EQ(f.tol, 1e-5);
    EXPECT_EQ(f.grid, 51);
    EXPECT_THROW(resolve_settings("abc", "", {}, {}), hardy::DomainError);
    {
        std::ofstream g(path);
        g << "tolerance = 3\n";
    }
    EXPECT_THROW(resolve_settings(nullptr, path.string(), {}, {}), hardy::DomainError);
    std::filesystem::remove(path);
}

TEST(Binary, ExitCodesAndOutput) {
    const std::string cmd = std::string(HARDY_CLI_PATH) + " measure Linf '[4,8)' > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    const std::string bad = std::string(HARDY_CLI_PATH) + " norm > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 2);
    const std::string env = "HARDY_DOMAIN_TOL=x " + std::string(HARDY_CLI_PATH) + " norm L1 'chi(0,1)' > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(env.c_str())), 2);
}
