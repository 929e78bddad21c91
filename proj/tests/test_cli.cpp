#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef FLAGRANK_BIN_PATH
#error "FLAGRANK_BIN_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;
};

// Runs a shell command, capturing stdout; stderr is dropped unless the
// caller redirects it explicitly.
RunResult run_cmd(const std::string& tail, const std::string& env_prefix = {}) {
    std::string cmd = env_prefix + std::string(FLAGRANK_BIN_PATH) + " " + tail + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    RunResult r;
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("flagrank_cli_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST(Cli, DimMatchesKnownValues) {
    RunResult r = run_cmd("dim '0,2;3' --json");
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["dim"], 5);
    EXPECT_EQ(j["span_projective"], 14);
    EXPECT_EQ(j["ambient_projective"], 15);
    EXPECT_EQ(j["alpha"], 1);

    json g = json::parse(run_cmd("dim 'G:1;3' --json").out);
    EXPECT_EQ(g["dim"], 4);
    EXPECT_EQ(g["ambient_projective"], 5);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cmd("dim '2,1;4'").code, 2);           // non-monotone ks
    EXPECT_EQ(run_cmd("secant '0,2;3' --h 0").code, 2);  // h below 1
    EXPECT_EQ(run_cmd("secant '0,2;3'").code, 2);        // missing --h
    EXPECT_EQ(run_cmd("").code, 2);                      // missing subcommand
    EXPECT_EQ(run_cmd("dim '0,2;3' --bogus").code, 2);   // unknown flag
    EXPECT_EQ(run_cmd("verify nosuch").code, 2);         // unknown suite
    EXPECT_EQ(run_cmd("secant '0,2;3' --h 2 --prime 10").code, 2); // composite prime
}

TEST(Cli, CapExceededExitsThree) {
    // 30 * (dim + 1) = 5970 stacked rows exceeds the 5000-row policy cap.
    EXPECT_EQ(run_cmd("secant 'G:1;100' --h 30").code, 3);
}

TEST(Cli, SecantJsonIsByteIdenticalAcrossRuns) {
    RunResult a = run_cmd("secant '0,2;3' --h 2 --json");
    RunResult b = run_cmd("secant '0,2;3' --h 2 --json");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    json j = json::parse(a.out);
    EXPECT_EQ(j["defect"], 1);
    EXPECT_EQ(j["certified"], true);
}

TEST(Cli, SeedChangesKeepTheRank) {
    json a = json::parse(run_cmd("secant '0,1;3' --h 2 --json --seed 1").out);
    json b = json::parse(run_cmd("secant '0,1;3' --h 2 --json --seed 99").out);
    EXPECT_EQ(a["rank_affine"], b["rank_affine"]);
    EXPECT_EQ(a["defect"], 0);
    EXPECT_EQ(b["defect"], 0);
}

TEST(Cli, CacheServesByteIdenticalRecords) {
    fs::path dir = fresh_dir("cache");
    fs::path cfg = dir / "config";
    fs::path cache = dir / "cache.jsonl";
    {
        std::ofstream out(cfg);
        out << "cache=" << cache.string() << "\n";
    }
    std::string env = "FLAGRANK_CONFIG=" + cfg.string() + " ";
    RunResult first = run_cmd("secant 'G:1;4' --h 2 --json", env);
    ASSERT_EQ(first.code, 0);
    ASSERT_TRUE(fs::exists(cache));
    EXPECT_EQ(line_count(cache), 1u);
    RunResult second = run_cmd("secant 'G:1;4' --h 2 --json", env);
    ASSERT_EQ(second.code, 0);
    EXPECT_EQ(first.out, second.out);        // hit == recompute, byte for byte
    EXPECT_EQ(line_count(cache), 1u);        // hit appends nothing
    RunResult other = run_cmd("secant 'G:1;4' --h 2 --json --seed 5", env);
    ASSERT_EQ(other.code, 0);
    EXPECT_EQ(line_count(cache), 2u);        // different key, new line
    json j = json::parse(other.out);
    EXPECT_EQ(j["seed"], 5);
}

TEST(Cli, ConfigSetsDefaultsAndFlagsOverride) {
    fs::path dir = fresh_dir("config");
    fs::path cfg = dir / "config";
    {
        std::ofstream out(cfg);
        out << "# defaults for this project\n";
        out << "prime = 1000003\n";
        out << "seed = 7\n";
    }
    std::string env = "FLAGRANK_CONFIG=" + cfg.string() + " ";
    json a = json::parse(run_cmd("secant 'G:1;3' --h 2 --json", env).out);
    EXPECT_EQ(a["prime"], 1000003);
    EXPECT_EQ(a["seed"], 7);
    json b = json::parse(run_cmd("secant 'G:1;3' --h 2 --json --prime 1000033 --seed 0", env).out);
    EXPECT_EQ(b["prime"], 1000033);
    EXPECT_EQ(b["seed"], 0);
}

TEST(Cli, BadConfigExitsTwo) {
    fs::path dir = fresh_dir("badconfig");
    fs::path cfg = dir / "config";
    {
        std::ofstream out(cfg);
        out << "wibble = 3\n";
    }
    std::string env = "FLAGRANK_CONFIG=" + cfg.string() + " ";
    EXPECT_EQ(run_cmd("dim 'G:1;3'", env).code, 2);
}

TEST(Cli, VerifyChordalSuite) {
    RunResult r = run_cmd("verify chordal --nmax 4");
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["suite"], "chordal");
    EXPECT_EQ(j["all_pass"], true);
    EXPECT_EQ(j["checked"], 3); // n = 2, 3, 4
}

TEST(Cli, VerifyOscWithShapeOverride) {
    RunResult r = run_cmd("verify osc --shapes 'G:1;3,G:0,1;3'");
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["all_pass"], true);
    // diameters 2 and 3 give orders 0..2 and 0..3
    EXPECT_EQ(j["checked"], 7);
}

TEST(Cli, VerifyIsByteIdenticalAcrossJobCounts) {
    RunResult a = run_cmd("verify cross");
    RunResult b = run_cmd("verify cross --jobs 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyBudgetSkipsDeterministically) {
    RunResult a = run_cmd("verify cross --budget 1s");
    RunResult b = run_cmd("verify cross --budget 1s");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run_cmd("verify cross --budget nonsense").code, 2);
}

TEST(Cli, BoundsLiteralGateFlag) {
    json a = json::parse(run_cmd("bounds 'G:4,4;60' --json").out);
    EXPECT_EQ(a["identifiability"]["applicable"], true);
    json b = json::parse(run_cmd("bounds 'G:4,4;60' --json --corid-literal").out);
    EXPECT_EQ(b["identifiability"]["applicable"], false);
    EXPECT_EQ(b["identifiability"]["literal_gate"], true);
}

TEST(Cli, CsvViewDerivesFromTheSameRecord) {
    RunResult r = run_cmd("dim '0,2;3' --csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("key,value\n"), std::string::npos);
    EXPECT_NE(r.out.find("dim,5\n"), std::string::npos);
    EXPECT_NE(r.out.find("span_projective,14\n"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(run_cmd("--help").code, 0);
    EXPECT_EQ(run_cmd("secant --help").code, 0);
}
