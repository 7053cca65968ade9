#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace bwave;
using namespace bwave::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("bwave_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(std::vector<std::string> args, std::string* err_out = nullptr) {
    args.insert(args.begin(), "bwave");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream err;
    const int rc = main_entry(static_cast<int>(argv.size()), argv.data(), err);
    if (err_out) *err_out = err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

}  // namespace

TEST(CliConfig, MinimalGaussianMatchesDefaults) {
    const auto dir = fresh_dir("cfg");
    write(dir / "g.cfg", "[scenario]\nkind = gaussian\neps = 0.3\nmu = 0.3\n");
    RunManifest m;
    m.command = Command::Validate;
    m.config_path = dir / "g.cfg";
    EXPECT_EQ(scenario_from_config(load_config(m)), validation::scenario_gaussian({0.3, 0.3}));
    m.overrides = {{"scenario.eps", "0.1"}, {"scenario.mu", "0.1"}};
    EXPECT_EQ(scenario_from_config(load_config(m)), validation::scenario_gaussian({0.1, 0.1}));
}

TEST(CliConfig, ZeroCellsRejected) {
    const auto dir = fresh_dir("nx0");
    write(dir / "b.cfg", "[model]\neps=0.3\nmu=0.3\n[domain]\nlength=5\nn_x=0\n[time]\ntf=1\n");
    RunManifest m;
    m.command = Command::RunBoussinesq;
    m.config_path = dir / "b.cfg";
    EXPECT_THROW(boussinesq_from_config(load_config(m)), ConfigError);
    m.output_dir = dir / "out";
    std::ostringstream err;
    EXPECT_EQ(execute(m, err), 2);
}

TEST(Cli, ValidateWritesTableShapedCsv) {
    const auto dir = fresh_dir("validate");
    ASSERT_EQ(run({"validate", "--scenario", "gaussian", "--eps", "0.3", "--mu", "0.3", "--out", dir.string(),
                   "--parallel", "4"}),
              0);
    const auto rows = csv::read_numeric(dir / "table.csv", "dx,e_zeta,order_zeta,e_q,order_q");
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_DOUBLE_EQ(rows[0][0], 5.0 / 90);
    EXPECT_TRUE(std::isnan(rows[0][2]));
    EXPECT_FALSE(std::isnan(rows[1][2]));
    const auto s = summary(dir);
    EXPECT_EQ(s["status"], "ok");
    EXPECT_EQ(s["scenario"]["reference_nx"], 3600);
    EXPECT_TRUE(s.contains("wall_time_s"));
    EXPECT_TRUE(fs::exists(dir / "reference_final.csv"));
    EXPECT_TRUE(fs::exists(dir / "coarse_final_nx90.csv"));
}

TEST(Cli, MakeSolitonCrest) {
    const auto dir = fresh_dir("soliton");
    ASSERT_EQ(run({"make-soliton", "--zeta-max", "1", "--eps", "0.3", "--mu", "0.3", "--out", dir.string()}), 0);
    const auto rows = csv::read_numeric(dir / "profile.csv", "xi,zeta,q");
    ASSERT_EQ(rows.size(), 2001u);
    EXPECT_EQ(rows[1000][0], 0.0);
    EXPECT_EQ(rows[1000][1], 1.0);
    EXPECT_NEAR(summary(dir)["speed"].get<double>(), 1.146838847007106, 1e-13);
}

TEST(Cli, RerunIsByteIdentical) {
    const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
    const auto cfg = a / "run.cfg";
    write(cfg,
          "[model]\neps = 0.3\nmu = 0.3\n[domain]\nlength = 10\nn_x = 200\n[time]\ntf = 3\nsnapshot_stride = 50\n"
          "[forcing]\nkind = sine\namplitude = 0.2\n");
    ASSERT_EQ(run({"run-boussinesq", "--config", cfg.string(), "--out", (a / "o").string()}), 0);
    ASSERT_EQ(run({"run-boussinesq", "--config", cfg.string(), "--out", (b / "o").string()}), 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a / "o")) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        const auto rel = fs::relative(e.path(), a / "o");
        EXPECT_EQ(slurp(e.path()), slurp(b / "o" / rel)) << rel;
    }
    EXPECT_GE(files, 4u);
    EXPECT_TRUE(fs::exists(a / "o" / "boundary.csv"));
}

TEST(Cli, WarningsReachSummary) {
    const auto dir = fresh_dir("warn");
    write(dir / "run.cfg",
          "[model]\neps = 0.3\nmu = 0.3\n[domain]\nlength = 10\nn_x = 100\n[time]\ntf = 1\n"
          "[forcing]\nkind = sine\n");
    std::string err;
    ASSERT_EQ(run({"run-boussinesq", "--config", (dir / "run.cfg").string(), "--out", (dir / "o").string()}, &err), 0);
    const auto s = summary(dir / "o");
    ASSERT_GE(s["warnings"].size(), 1u);
    for (const auto& w : s["warnings"]) EXPECT_NE(err.find(w.get<std::string>()), std::string::npos);
    EXPECT_NE(s["warnings"][0].get<std::string>().find("incompatible"), std::string::npos);
}

TEST(Cli, SweRunAndCflHardError) {
    const auto dir = fresh_dir("swe");
    write(dir / "swe.cfg",
          "[physics]\ng = 9.81\nH0 = 1\n[domain]\nlength = 50\nn_x = 250\n[time]\ntf = 5\n[forcing]\nkind = sine\n"
          "amplitude = 0.05\n");
    ASSERT_EQ(run({"run-swe", "--config", (dir / "swe.cfg").string(), "--out", (dir / "o").string()}), 0);
    const auto snap = read_snapshot(dir / "o" / "snapshots" / "snapshot_000000.csv");
    EXPECT_EQ(snap.x.size(), 250u);
    write(dir / "big.cfg",
          "[domain]\nlength = 50\nn_x = 250\n[time]\ntf = 5\ncfl_error = true\n[forcing]\nkind = sine\n"
          "amplitude = 0.9\nperiod = 1\n");
    EXPECT_EQ(run({"run-swe", "--config", (dir / "big.cfg").string(), "--out", (dir / "o2").string(),
                   "--courant", "1"}),
              3);
}

TEST(Cli, ExitCodes) {
    const auto dir = fresh_dir("codes");
    std::string err;
    // Missing required key.
    EXPECT_EQ(run({"validate", "--eps", "0.3", "--out", dir.string()}, &err), 2);
    EXPECT_NE(err.find("scenario.kind"), std::string::npos);
    // Unknown key in the file.
    write(dir / "u.cfg", "[scenario]\nkind = gaussian\neps = 0.3\nmu = 0.3\nbogus = 1\n");
    EXPECT_EQ(run({"validate", "--config", (dir / "u.cfg").string(), "--out", dir.string()}, &err), 2);
    EXPECT_NE(err.find("scenario.bogus"), std::string::npos);
    // Unreadable config.
    EXPECT_EQ(run({"validate", "--config", (dir / "nope.cfg").string(), "--out", dir.string()}), 4);
    // Bad flag.
    EXPECT_EQ(run({"validate", "--frobnicate"}), 2);
    // Output directory blocked by a file.
    write(dir / "blocker", "x");
    EXPECT_EQ(run({"make-soliton", "--eps", "0.3", "--mu", "0.3", "--out", (dir / "blocker" / "sub").string()}), 4);
}

TEST(Cli, SolitonRunThroughBoundary) {
    const auto dir = fresh_dir("solrun");
    write(dir / "s.cfg",
          "[model]\neps=0.3\nmu=0.3\n[domain]\nlength=10\nn_x=200\n[time]\ntf=8\ncourant=0.8\n"
          "[initial]\nkind=soliton\nx_center=-5\n[forcing]\nkind=soliton\n");
    ASSERT_EQ(run({"run-boussinesq", "--config", (dir / "s.cfg").string(), "--out", (dir / "o").string()}), 0);
    const auto s = summary(dir / "o");
    for (const auto& w : s["warnings"]) EXPECT_EQ(w.get<std::string>().find("incompatible"), std::string::npos) << w;
    const auto last = read_snapshot(dir / "o" / "snapshots" / snapshot_name(s["steps"].get<std::size_t>()));
    const double peak = *std::max_element(last.zeta.begin(), last.zeta.end());
    EXPECT_GT(peak, 0.8);
    EXPECT_LT(peak, 1.05);
}
