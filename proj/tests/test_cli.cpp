#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "cascade/io.hpp"

using namespace cascade;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / ("cascade_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(CASCADE_CLI_PATH) + " " + args + " > " + (work_dir() / "stdout.txt").string() +
                          " 2> " + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stderr_text() { return read_file(work_dir() / "stderr.txt"); }

std::string path(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST(Cli, UnknownFlagIsSchemaError) {
  EXPECT_EQ(run("evolve --alpa 1"), 2);
  EXPECT_NE(stderr_text().find("--alpa"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyIsSchemaError) {
  write_atomic(path("bad.json"), R"({"k": 2, "alpah": 1})");
  EXPECT_EQ(run("--config " + path("bad.json") + " evolve --out " + path("t.csv")), 2);
  EXPECT_NE(stderr_text().find("alpah"), std::string::npos);
}

TEST(Cli, WrongValueTypeIsSchemaError) {
  write_atomic(path("typed.json"), R"({"k": "two"})");
  EXPECT_EQ(run("--config " + path("typed.json") + " evolve"), 2);
}

TEST(Cli, SubcriticalSpeedIsSchemaError) { EXPECT_EQ(run("wave --c 1.5 --out " + path("w.csv")), 2); }

TEST(Cli, UnwritableOutputIsIoError) { EXPECT_EQ(run("wave --out /proc/nope/profile.csv"), 4); }

TEST(Cli, NumericalFailureExitCode) {
  // A window far too small for follow_front.
  EXPECT_EQ(run("evolve --x-min -2 --x-max 8 --t-end 20 --window-policy follow_front --out " + path("t.csv")), 3);
}

TEST(Cli, WaveWritesSelfDescribingCsv) {
  ASSERT_EQ(run("wave --c 2.5 --out " + path("profile.csv")), 0);
  const auto t = read_csv(path("profile.csv"));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"x", "U"}));
  const auto cfg = config_from_comments(t.comments);
  EXPECT_EQ(cfg.at("c"), 2.5);
  EXPECT_EQ(cfg.at("f"), "quadratic");
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  write_atomic(path("cfg.json"), R"({"k": 2, "alpha": 0.5, "t_end": 2.0, "x_min": -20, "x_max": 40})");
  ASSERT_EQ(run("--config " + path("cfg.json") + " evolve --alpha 1.5 --snap 1,2 --out " + path("traj.csv")), 0);
  const auto t = read_csv(path("traj.csv"));
  const auto cfg = config_from_comments(t.comments);
  EXPECT_EQ(cfg.at("k"), 2);
  EXPECT_EQ(cfg.at("alpha"), 1.5);
  EXPECT_EQ(cfg.at("t_end"), 2.0);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "component", "x", "value"}));
  // Two snapshots, two components, 1201 points each.
  EXPECT_EQ(t.rows.size(), 2u * 2u * 1201u);
}

TEST(Cli, EvolveThenFront) {
  ASSERT_EQ(run("evolve --k 1 --x-min -20 --x-max 120 --t-end 40 --snap 4:40:0.5 --out " + path("tr.csv")), 0);
  ASSERT_EQ(run("front --in " + path("tr.csv") + " --window 4:40 --out " + path("fit.json")), 0);
  const auto fit = read_json(path("fit.json"));
  const auto& f = fit.at("fits").at(0);
  EXPECT_EQ(f.at("samples"), 73);
  for (const char* key : {"c_hat", "a_hat", "b_hat", "rms_residual", "window"}) EXPECT_TRUE(f.contains(key)) << key;
  // Early-time fronts already lag behind 2t logarithmically.
  EXPECT_GT(f.at("a_hat").get<double>(), 0.5);
}

TEST(Cli, BbmCompareAndDeterminism) {
  ASSERT_EQ(run("--seed 7 --threads 1 bbm --k 2 --t 4 --replicas 300 --out " + path("m1.csv")), 0);
  ASSERT_EQ(run("--seed 7 --threads 4 bbm --k 2 --t 4 --replicas 300 --out " + path("m4.csv")), 0);
  const auto a = read_file(path("m1.csv")), b = read_file(path("m4.csv"));
  // Only the echoed thread count differs.
  EXPECT_EQ(a.substr(a.find("max_position")), b.substr(b.find("max_position")));
  ASSERT_EQ(run("evolve --k 2 --x-min -30 --x-max 50 --t-end 4 --snap 4 --out " + path("p.csv")), 0);
  ASSERT_EQ(run("compare --bbm " + path("m1.csv") + " --pde " + path("p.csv") + " --t 4 --out " + path("ks.json")), 0);
  const auto ks = read_json(path("ks.json"));
  EXPECT_LT(ks.at("distance").get<double>(), 0.1);
  EXPECT_EQ(ks.at("samples"), 300);
}

TEST(Cli, SelfSimSeries) {
  ASSERT_EQ(run("selfsim --k 2 --t0 10000 --tau-end 6 --out " + path("q.csv")), 0);
  const auto t = read_csv(path("q.csv"));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"tau", "component", "q", "remainder_norm"}));
  EXPECT_EQ(t.rows.size(), 2u * 121u);
}

TEST(Cli, ReproduceIsByteIdentical) {
  ASSERT_EQ(run("reproduce traveling-wave --out " + path("r1.json")), 0);
  ASSERT_EQ(run("reproduce traveling-wave --out " + path("r2.json")), 0);
  EXPECT_EQ(read_file(path("r1.json")), read_file(path("r2.json")));
  EXPECT_TRUE(read_json(path("r1.json")).at("passed").get<bool>());
  EXPECT_EQ(run("reproduce no-such-recipe"), 2);
}
