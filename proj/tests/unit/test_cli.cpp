#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuseplan/cli.hpp"

namespace fuseplan {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(FUSEPLAN_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("fuseplan_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, EnumerateCounts) {
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:TREE"}).out, "12288\n");
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:LINEAR"}).out, "768\n");
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:LINEAR", "--levels", "1"}).out, "16\n");
  EXPECT_EQ(run_cli({"enumerate", "--app", fixture("single_task.json")}).out, "3\n");
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:LINEAR", "--levels", fixture("levels.json")}).out,
            "162\n");
  const auto listed = run_cli({"enumerate", "--app", fixture("s2_sync.json"), "--list"});
  EXPECT_EQ(listed.out.substr(0, 19), "12\nA,B@0,0\nA,B@0,1\n");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"enumerate"}).code, 1);
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:NOPE"}).code, 1);
  EXPECT_EQ(run_cli({"enumerate", "--app", fixture("cycle.json")}).code, 1);
  EXPECT_EQ(run_cli({"enumerate", "--app", fixture("does_not_exist.json")}).code, 2);
  EXPECT_EQ(run_cli({"enumerate", "--app", "builtin:TREE", "--levels", "4"}).code, 1);
  EXPECT_EQ(run_cli({"sweep", "--results", path("missing.csv")}).code, 2);
  EXPECT_EQ(run_cli({"run", "--app", "builtin:TREE", "--out", path("no/such/dir/x.csv")}).code, 2);
  EXPECT_EQ(run_cli({"calibrate", "--exponent", "9"}).code, 1);
  EXPECT_EQ(run_cli({"run", "--app", "builtin:TREE", "--pricing", "spot"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  const auto bad = run_cli({"enumerate", "--app", fixture("cycle.json")});
  EXPECT_NE(bad.err.find("directed cycle"), std::string::npos);
  EXPECT_EQ(bad.err.find('\033'), std::string::npos);
}

TEST_F(CliTest, RunIsDeterministicAcrossJobs) {
  ASSERT_EQ(run_cli({"run", "--app", "builtin:TREE", "--out", path("a.csv"), "--jobs", "1"}).code, 0);
  ASSERT_EQ(run_cli({"run", "--app", "builtin:TREE", "--out", path("b.csv"), "--jobs", "8"}).code, 0);
  ASSERT_EQ(run_cli({"run", "--app", "builtin:TREE", "--out", path("c.csv"), "--jobs", "1", "--seed", "42"}).code, 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(a, slurp(path("c.csv")));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 12289);
}

TEST_F(CliTest, RunSingleTaskAndTrace) {
  const auto one = run_cli({"run", "--app", fixture("single_task.json")});
  EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 4);
  const auto traced = run_cli({"run", "--app", fixture("s2_sync.json"), "--trace", fixture("s2_trace.csv"),
                               "--platform", fixture("warm_platform.json"), "--levels", "3"});
  ASSERT_EQ(traced.code, 0) << traced.err;
  // Warm, zero network, fused at cpu 1.0: 100 + 100 ms.
  EXPECT_NE(traced.out.find("S2,AB@2,200,"), std::string::npos) << traced.out;
}

TEST_F(CliTest, SweepLinearFullyFused) {
  ASSERT_EQ(run_cli({"run", "--app", "builtin:LINEAR", "--out", path("l.csv")}).code, 0);
  for (const char* pricing : {"traditional", "instance_based"}) {
    const auto r = run_cli({"sweep", "--results", path("l.csv"), "--pricing", pricing, "--out", path("s.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ABCDE"), std::string::npos);
    EXPECT_NE(r.out.find("100.00%"), std::string::npos);
    EXPECT_NE(slurp(path("s.json")).find("\"ABCDE\": 100.0"), std::string::npos);
  }
  const auto two = run_cli({"sweep", "--results", path("l.csv"), "--alpha-steps", "2"});
  EXPECT_NE(two.out.find("\"steps\": 2"), std::string::npos);
  EXPECT_EQ(run_cli({"sweep", "--results", path("l.csv"), "--alpha-steps", "1"}).code, 1);
}

TEST_F(CliTest, PlotAndPath) {
  ASSERT_EQ(run_cli({"run", "--app", "builtin:TREE", "--out", path("t.csv")}).code, 0);
  ASSERT_EQ(run_cli({"plot", "--results", path("t.csv"), "--out", path("t.svg")}).code, 0);
  const std::string svg = slurp(path("t.svg"));
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle class=\"setup\""); pos != std::string::npos;
       pos = svg.find("<circle class=\"setup\"", pos + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 12288u);

  ASSERT_EQ(run_cli({"run", "--app", "builtin:LINEAR", "--out", path("l.csv")}).code, 0);
  const auto plotted = run_cli({"plot", "--results", path("l.csv"), "--out", path("l.svg"), "--path", "--app",
                                "builtin:LINEAR"});
  ASSERT_EQ(plotted.code, 0) << plotted.err;
  const std::string lsvg = slurp(path("l.svg"));
  const auto end = lsvg.find("data-end=\"ABCDE@");
  EXPECT_NE(end, std::string::npos);

  const auto p = run_cli({"path", "--app", "builtin:LINEAR", "--alpha", "0.5"});
  ASSERT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("final ABCDE@"), std::string::npos);
  EXPECT_EQ(run_cli({"path", "--app", "builtin:LINEAR", "--normalize", "visited"}).code, 0);
  EXPECT_EQ(run_cli({"path", "--app", "builtin:LINEAR", "--normalize", "some"}).code, 1);

  std::ofstream(path("empty.csv")) << "";
  const auto empty = run_cli({"plot", "--results", path("empty.csv"), "--out", path("e.svg")});
  EXPECT_EQ(empty.code, 1);
  EXPECT_NE(empty.err.find("no data"), std::string::npos);
}

TEST_F(CliTest, ParetoHeuristicCalibrateApps) {
  ASSERT_EQ(run_cli({"run", "--app", "builtin:PARALLEL_LINEAR", "--out", path("p.csv")}).code, 0);
  const auto front = run_cli({"pareto", "--results", path("p.csv"), "--pricing", "instance_based"});
  ASSERT_EQ(front.code, 0);
  EXPECT_EQ(front.out.substr(0, front.out.find('\n')), "setup,latency_ms,cost_pmi_usd");

  EXPECT_EQ(run_cli({"heuristic", "--app", "builtin:TREE"}).out, "ABDE,C,F,G\n");
  EXPECT_EQ(run_cli({"heuristic", "--app", "builtin:ASYNC"}).out, "A,B,C,D,E\n");
  const auto cal = run_cli({"calibrate", "--exponent", "3"});
  EXPECT_EQ(cal.code, 0);
  EXPECT_NE(cal.out.find("is prime"), std::string::npos);
  EXPECT_NE(run_cli({"calibrate", "--exponent", "11"}).out.find("composite"), std::string::npos);
  const auto apps = run_cli({"apps", "list"});
  for (const char* name : {"LINEAR", "PARALLEL_LINEAR", "TREE", "ASYNC"}) {
    EXPECT_NE(apps.out.find(name), std::string::npos);
  }
}

TEST_F(CliTest, ColorOnlyWhenRequested) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"enumerate", "--app", "builtin:NOPE"}, out, err, true), 1);
  EXPECT_NE(err.str().find("\033[31m"), std::string::npos);
  ::setenv("FUSEPLAN_NO_COLOR", "1", 1);
  EXPECT_FALSE(cli::color_enabled_for_stdout());
  ::unsetenv("FUSEPLAN_NO_COLOR");
}

TEST_F(CliTest, PricingConfigFile) {
  std::ofstream(path("free.json")) << R"({"model": "traditional", "request_fee_usd": 0, "gb_second_rate_usd": 0})";
  const auto r = run_cli({"run", "--app", fixture("single_task.json"), "--pricing", path("free.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ONE,A@2,205,0,"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace fuseplan
