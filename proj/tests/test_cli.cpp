#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>

#include "mira/io.hpp"

namespace fs = std::filesystem;
using mira::io::json;

namespace {
struct CliRun {
    int code;
    std::string out;
};

fs::path scratch() {
    static fs::path d = [] {
        auto p = fs::temp_directory_path() / "mira_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

CliRun cli(const std::string& args, const std::string& env = "") {
    fs::path out = scratch() / "stdout.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + "'" MIRACLI_PATH "' " + args + " > '" + out.string() +
                      "' 2> '" + (scratch() / "stderr.txt").string() + "'";
    int rc = std::system(cmd.c_str());
    auto text = mira::io::read_file(out);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, text ? *text : ""};
}
}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("pi --n -1").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("nosuch").code, 2);
    EXPECT_EQ(cli("pi --n 2 --format xml").code, 2);
    EXPECT_EQ(cli("pi --n 3 --N 2").code, 2);
    EXPECT_EQ(cli("verify --suite nosuch").code, 2);
    EXPECT_EQ(cli("mirabolic act --gen 1 --src 1,1 --N 2").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, PiCsv) {
    CliRun r = cli("pi --n 2 --N 2 --format csv");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], R"x(row,"((2),())","((1),(1))","((1,1),())","((),(2))","((),(1,1))")x");
    EXPECT_EQ(lines[5], R"x("((),(1,1))",v^-4,v^-1+v^-3,v^-2,v^-2,1)x");
}

TEST(Cli, PiJsonRoundTrips) {
    CliRun r = cli("pi --n 3");
    ASSERT_EQ(r.code, 0);
    auto t = mira::io::pi_table_from(json::parse(r.out));
    EXPECT_EQ(t.calibrated, mira::pi_table(3, 3).calibrated);
    CliRun tex = cli("pi --n 2 --format latex");
    EXPECT_NE(tex.out.find("v^{-1}+v^{-3}"), std::string::npos);
}

TEST(Cli, VerifySmall) {
    CliRun r = cli("verify --suite all --qs 2,3 --max-n 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(json::parse(r.out).at("pass").get<bool>());
    // the red structure-constant range exits 1
    EXPECT_EQ(cli("verify --suite structure --max-src 4").code, 1);
}

TEST(Cli, ConfigFileFlagsWin) {
    fs::path cfg = scratch() / "cfg.ini";
    mira::io::write_file(cfg, "[verify]\nmax-n=2\nqs=2\n");
    CliRun a = cli("--config '" + cfg.string() + "' verify --suite census");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(json::parse(a.out)["params"]["max_n"], 2);
    EXPECT_EQ(json::parse(a.out)["params"]["qs"], json::array({2}));
    CliRun b = cli("--config '" + cfg.string() + "' verify --suite census --max-n 1");
    EXPECT_EQ(json::parse(b.out)["params"]["max_n"], 1);
    mira::io::write_file(cfg, "bogus=1\n");
    EXPECT_EQ(cli("--config '" + cfg.string() + "' verify --suite census").code, 2);
}

TEST(Cli, CacheHitsMatchColdRuns) {
    fs::path dir = scratch() / "cache";
    std::string env = "MIRA_CACHE_DIR='" + dir.string() + "'";
    CliRun plain = cli("pi --n 3 --format csv");
    CliRun cold = cli("pi --n 3 --format csv", env);
    EXPECT_TRUE(fs::exists(dir));
    CliRun warm = cli("pi --n 3 --format csv", env);
    EXPECT_EQ(plain.out, cold.out);
    EXPECT_EQ(cold.out, warm.out);
    CliRun iw1 = cli("iwahori mult --N 2 --window 1 --qs 2,3", env);
    CliRun iw2 = cli("iwahori mult --N 2 --window 1 --qs 2,3", env);
    ASSERT_EQ(iw1.code, 0);
    EXPECT_EQ(iw1.out, iw2.out);
    EXPECT_FALSE(json::parse(iw1.out)["products"].empty());
}

TEST(Cli, TraceAndOracle) {
    CliRun r = cli("trace --n 2 --q 2");
    ASSERT_EQ(r.code, 0);
    bool seen = false;
    json j = json::parse(r.out);
    for (auto& c : j["cells"])
        if (c["col"] == json::parse("[[1],[1]]") && c["row"] == json::parse("[[],[1,1]]")) {
            EXPECT_EQ(c["value"], "3");
            seen = true;
        }
    EXPECT_TRUE(seen);
    CliRun o = cli("trace --n 3 --q 3 --oracle");
    EXPECT_EQ(o.code, 0);
    EXPECT_TRUE(json::parse(o.out)["pass"].get<bool>());
}
