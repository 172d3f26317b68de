#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "explie/cli.hpp"

using explie::cli::Json;
using explie::cli::run_command;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("explie_cli_" + name);
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST(Cli, VandermondeVerify)
{
    const Outcome r = run({"vandermonde", "verify", "--trials", "50", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["schema_version"], "1.0");
    ASSERT_EQ(j["records"].size(), 50u);
    for (const auto& rec : j["records"]) {
        EXPECT_TRUE(rec["match"].get<bool>());
        EXPECT_EQ(rec["closed_form"], rec["elimination"]);
    }
    EXPECT_EQ(j["systems"].size(), 20u);
}

TEST(Cli, VirasoroBounds)
{
    const Outcome r = run({"virasoro", "bounds", "--imax", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json rows = Json::parse(r.out)["rows"];
    ASSERT_EQ(rows.size(), 3u);
    const int dims[] = {1, 3, 9};
    const char* bounds[] = {"1", "3", "15"};
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(rows[i]["i"], i);
        EXPECT_EQ(rows[i]["dim"], dims[i]);
        EXPECT_EQ(rows[i]["bound"], bounds[i]);
        EXPECT_TRUE(rows[i]["pass"].get<bool>());
    }
}

TEST(Cli, DimsToroidal)
{
    const Outcome r = run({"dims", "--algebra", "toroidal-sl2", "--module", "loop-q2", "--degree", "1", "--weight", "0", "--boxes", "1,2,3,4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json res = Json::parse(r.out)["results"];
    ASSERT_EQ(res.size(), 1u);
    EXPECT_TRUE(res[0]["stabilized"].get<bool>());
    EXPECT_EQ(res[0]["symbolic_dim"], 6);
    ASSERT_EQ(res[0]["ranks"].size(), 4u);
    for (const auto& row : res[0]["ranks"]) EXPECT_EQ(row["rank"], 6);
}

TEST(Cli, OtherSubcommandsPass)
{
    EXPECT_EQ(run({"algebra", "check", "--algebra", "witt", "--samples", "30"}).code, 0);
    EXPECT_EQ(run({"module", "check", "--algebra", "quantum-torus", "--module", "qt-fd", "--samples", "30"}).code, 0);
    EXPECT_EQ(run({"module", "check", "--algebra", "virasoro-like", "--samples", "30"}).code, 0);
    EXPECT_EQ(run({"virasoro", "cor32", "--degree", "1"}).code, 0);
    const Outcome r = run({"radical", "test", "--trials", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["rewrite"][0]["coefficients"], (Json{"1", "-1", "3", "-3"}));
    EXPECT_EQ(j["null"].size(), 3u);
    EXPECT_EQ(j["nonnull"].size(), 3u);
}

TEST(Cli, FailedVerificationExitsOne)
{
    // [L_a, L_a] = L_{2a}: not antisymmetric
    const auto bad = temp_file("bad.alg", "n 1\nfamily * L\nbracket * L * L -> L : 1\n");
    const Outcome a = run({"algebra", "check", "--algebra-file", bad.string(), "--samples", "20"});
    EXPECT_EQ(a.code, 1);
    EXPECT_FALSE(Json::parse(a.out)["violations"].empty());

    // Witt bracket, but L_a acting by a is not a representation
    const auto alg = temp_file("witt.alg", "n 1\nfamily * L\nbracket * L * L -> L : b1 - a1\n");
    const auto mod = temp_file("bad.mod", "kind graded\nbasis v\nact L v -> v : a1\n");
    const Outcome m = run({"module", "check", "--algebra-file", alg.string(), "--module-file", mod.string(), "--samples", "20"});
    EXPECT_EQ(m.code, 1);
}

TEST(Cli, UsageErrorsExitTwo)
{
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{}, {"nonsense"}, {"vandermonde"}, {"vandermonde", "verify", "--bogus"}, {"dims", "--format", "xml"},
          {"dims"}, {"algebra", "check", "--algebra", "nope"}, {"module", "check", "--algebra", "witt"},
          {"virasoro", "bounds", "--imax", "9"}, {"dims", "--algebra", "witt", "--boxes", "2,1"}, {"radical", "test", "--max-level", "5"},
          {"dims", "--algebra", "toroidal-sl2", "--weight", "0,0"}, {"dims", "--depth", "0", "--algebra", "witt"}}) {
        const Outcome r = run(args);
        EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args.front());
        EXPECT_TRUE(r.out.empty());
        EXPECT_NE(r.err.find("error"), std::string::npos);
    }
}

TEST(Cli, HelpExitsZero)
{
    const Outcome r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("vandermonde"), std::string::npos);
}

TEST(Cli, Deterministic)
{
    const std::vector<std::vector<std::string>> cmds = {
        {"vandermonde", "verify", "--trials", "10", "--seed", "3"},
        {"algebra", "check", "--algebra", "quantum-torus", "--samples", "40", "--seed", "5"},
        {"module", "check", "--algebra", "toroidal-sl2", "--samples", "40", "--format", "csv"},
        {"radical", "test", "--trials", "2", "--seed", "11"},
    };
    for (const auto& c : cmds) {
        const Outcome a = run(c), b = run(c);
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out);
    }
    EXPECT_NE(run(cmds[0]).out, run({"vandermonde", "verify", "--trials", "10", "--seed", "4"}).out);
}

TEST(Cli, ConfigMergedUnderFlags)
{
    const auto kv = temp_file("kv.cfg", "# comment\nalgebra = quantum-torus\nsamples=25\nformat=csv\n");
    Outcome r = run({"algebra", "check", "--config", kv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "schema_version,algebra,pairs_checked,triples_checked,violations,pass\n1.0,quantum-torus,75,25,0,true\n");

    // explicit flags win
    r = run({"algebra", "check", "--config", kv.string(), "--format", "json", "--samples", "5"});
    ASSERT_EQ(r.code, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["samples"], 5);
    EXPECT_EQ(j["algebra"], "quantum-torus");

    const auto js = temp_file("c.json", R"({"algebra": "toroidal-sl2", "module": "loop", "module-param": ["q=3"], "degree": [1],
                                            "weight": "0", "boxes": [1, 2], "no-symbolic": true})");
    r = run({"dims", "--config", js.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json d = Json::parse(r.out);
    EXPECT_TRUE(d["results"][0]["symbolic_dim"].is_null());
    EXPECT_EQ(d["boxes"], (Json{1, 2}));

    EXPECT_EQ(run({"dims", "--config", temp_file("u.cfg", "colour=blue\n").string()}).code, 2);
    EXPECT_EQ(run({"dims", "--config", temp_file("m.cfg", "algebra\n").string()}).code, 2);
    EXPECT_EQ(run({"dims", "--config", "/nonexistent/explie.cfg"}).code, 2);
}

TEST(Cli, CsvAndOutFile)
{
    const Outcome r = run({"virasoro", "bounds", "--imax", "1", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "schema_version,i,dim,bound,pass\n1.0,0,1,1,true\n1.0,1,3,3,true\n");

    const auto path = std::filesystem::temp_directory_path() / "explie_cli_out.json";
    std::filesystem::remove(path);
    const Outcome w = run({"virasoro", "bounds", "--imax", "1", "--out", path.string()});
    ASSERT_EQ(w.code, 0);
    EXPECT_TRUE(w.out.empty());
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    EXPECT_EQ(Json::parse(s.str())["rows"].size(), 2u);
}

TEST(Cli, CsvQuoting)
{
    EXPECT_EQ(explie::cli::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(explie::cli::csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    EXPECT_EQ(explie::cli::csv_field("plain"), "plain");
}
