#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SCOLAB_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) out += buf.data();
    const int raw = pclose(p);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("scolab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, CountPrintsThirteen) {
    const auto r = run("geometry count --d 2 --R 2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "13\n");
}

TEST(Cli, BoundsJson) {
    const auto r = run("bounds --d 4 --R 2 --eps 0.1 --delta 0.25");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["linf"]["combined"].get<double>(), 2.104, 5e-4);
    EXPECT_EQ(j["count_l2"].get<long long>(), 89);
}

TEST(Cli, VerifyGadgetPasses) {
    const auto r = run("verify --suite gadget");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
    auto r = run("geometry count --d 2 --R 2 --bogus 1");
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("--bogus"), std::string::npos) << r.out;
    r = run("verify --suite nope");
    EXPECT_EQ(r.status, 2);
    r = run("simulate --family nosuch --out /tmp/scolab_cli_never");
    EXPECT_EQ(r.status, 2);
    r = run("simulate --m-grid 4,2 --out /tmp/scolab_cli_never");
    EXPECT_EQ(r.status, 2);
    r = run("");
    EXPECT_EQ(r.status, 2);
}

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(run("--help").status, 0);
    EXPECT_EQ(run("simulate --help").status, 0);
}

TEST(Cli, SimulateWritesArtifactsAndIsReproducible) {
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    const std::string args =
        " --id coin-small --family coin --rule erm --d 2 --R 1 --eps 0.25 --delta 0.25"
        " --m-grid 1,2,4,8,16 --trials 50 --seed 9";
    auto r = run("simulate" + args + " --threads 1 --out " + a.string());
    ASSERT_EQ(r.status, 0) << r.out;
    r = run("simulate" + args + " --threads 3 --out " + b.string());
    ASSERT_EQ(r.status, 0) << r.out;
    for (const char* f : {"trials.csv", "summary.json", "manifest.json"})
        EXPECT_TRUE(fs::exists(a / "coin-small" / f)) << f;
    EXPECT_EQ(slurp(a / "coin-small" / "trials.csv"), slurp(b / "coin-small" / "trials.csv"));

    const auto m = nlohmann::json::parse(slurp(a / "coin-small" / "manifest.json"));
    EXPECT_EQ(m["config"]["seed"].get<std::uint64_t>(), 9u);
    EXPECT_EQ(m["tool"], "scolab");
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = scratch("cfg");
    {
        std::ofstream os(dir / "c.json");
        os << R"({"id":"from-file","family":"coin","d":2,"R":"1","eps":0.25,"delta":0.25,)"
           << R"("m_grid":[1,4],"trials":10,"seed":3})";
    }
    const auto r = run("simulate --config " + (dir / "c.json").string() + " --trials 20 --out " + dir.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto m = nlohmann::json::parse(slurp(dir / "from-file" / "manifest.json"));
    EXPECT_EQ(m["config"]["trials"].get<long long>(), 20);
    EXPECT_EQ(m["config"]["seed"].get<std::uint64_t>(), 3u);
}

TEST(Cli, RatefitReadsSummaries) {
    const fs::path dir = scratch("fit");
    std::string inputs;
    int k = 0;
    for (const char* eps : {"0.08", "0.04", "0.02", "0.01"}) {
        const std::string id = "q" + std::to_string(k++);
        const auto r = run("simulate --id " + id +
                           " --family quad --rule erm_continuous --d 2 --R 8 --mu 1 --L 1 --sigma 1 --eps " + eps +
                           " --delta 0.25 --m-grid 1,2,4,8,16,32,64,128,256,512,1024 --trials 200 --seed 5 --out " +
                           dir.string());
        ASSERT_EQ(r.status, 0) << r.out;
        inputs += " " + (dir / id / "summary.json").string();
    }
    const auto r = run("ratefit --in" + inputs + " --out " + (dir / "fit.json").string());
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(fs::exists(dir / "fit.json.manifest.json"));
    const auto j = nlohmann::json::parse(slurp(dir / "fit.json"));
    EXPECT_NEAR(j["slope"].get<double>(), 1.0, 0.35);
}

TEST(Cli, PackingWritesManifest) {
    const fs::path dir = scratch("pack");
    const auto r = run("geometry packing --d 12 --s 4 --seed 2 --out " + (dir / "p.csv").string());
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(fs::exists(dir / "p.csv"));
    EXPECT_TRUE(fs::exists(dir / "p.csv.manifest.json"));
}
