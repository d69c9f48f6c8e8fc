#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "homophily/ingest.hpp"

namespace homophily {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "homophily");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("homophily_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateAndAnalyzePureHomophily) {
  auto r = run({"generate", "--kind", "pure_homophily", "--groups", "3", "--group-size", "4", "--out", path("ph")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"analyze", "--manifest", path("ph/manifest.txt"), "--out", path("ph/report")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "edge_hom=1.000 hhat=1.000\n");
  EXPECT_TRUE(fs::exists(path("ph/report/report.json")));
  EXPECT_EQ(slurp(path("ph/report/compat.csv")), "class,0,1,2\n0,1,0,0\n1,0,1,0\n2,0,0,1\n");
}

TEST_F(CliTest, AnalyzeIsolatedNodeExitsOne) {
  fs::create_directories(path("iso"));
  std::ofstream(path("iso/edges.txt")) << "0 1\n1 2\n";
  std::ofstream(path("iso/labels.txt")) << "0\n0\n1\n1\n1\n";
  std::ofstream(path("iso/manifest.txt")) << "name: iso\nedges: edges.txt\nlabels: labels.txt\n";
  const auto r = run({"analyze", "--manifest", path("iso/manifest.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("3, 4"), std::string::npos) << r.err;
}

TEST_F(CliTest, GenerateErRecordsRngMetadata) {
  const auto r = run({"generate", "--kind", "er", "--n", "50", "--p", "0.2", "--fractions", "0.6,0.4", "--seed",
                      "11", "--out", path("er")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_manifest(path("er/manifest.txt"));
  EXPECT_EQ(m.metadata.at("rng"), "mt19937_64/splitmix64-child/fisher-yates");
  EXPECT_EQ(m.metadata.at("seed"), "11");
  EXPECT_EQ(load_dataset(m).labels.class_sizes(), (std::vector<std::int64_t>{30, 20}));
  const auto again = run({"generate", "--kind", "er", "--n", "50", "--p", "0.2", "--fractions", "0.6,0.4",
                          "--seed", "11", "--out", path("er2")});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(path("er/edges.txt")), slurp(path("er2/edges.txt")));
}

TEST_F(CliTest, SweepWritesCsv) {
  const auto r = run({"sweep", "--n", "40", "--fracs", "0.5,0.8", "--seeds", "5", "--out", path("sw")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("sw/sweep.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frac,h_mean,h_std,hhat_mean,hhat_std");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 4), "0.5,");
}

TEST_F(CliTest, SplitWritesRoles) {
  run({"generate", "--kind", "pure_homophily", "--groups", "2", "--group-size", "10", "--out", path("ph")});
  const auto r = run({"split", "--manifest", path("ph/manifest.txt"), "--splits", "2", "--out", path("sp")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("sp/splits.csv"));
  EXPECT_EQ(csv.substr(0, 16), "split,node,role\n");
  // 2 splits x 20 nodes plus the header.
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
}

TEST_F(CliTest, BenchLp1OnArchetype) {
  run({"generate", "--kind", "pure_homophily", "--groups", "4", "--group-size", "6", "--out", path("ph")});
  const auto r = run({"bench", "--manifest", path("ph/manifest.txt"), "--methods", "lp1", "--out", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "lp1 1.000±0.000\n");
  EXPECT_EQ(slurp(path("b/summary.txt")), r.out);
  const auto rep = run({"report", "--results", path("b/results.csv")});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out.substr(0, 16), "lp1 1.000±0.000");
}

TEST_F(CliTest, BenchRerunIsByteIdentical) {
  run({"generate", "--kind", "one_per_class", "--classes", "3", "--groups", "6", "--out", path("opc")});
  const std::vector<std::string> common{"bench", "--manifest", path("opc/manifest.txt"), "--methods",
                                        "lp1,lp2,link", "--seeds", "3", "--splits", "3", "--threads", "3"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", path("a")});
  b.insert(b.end(), {"--out", path("b")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(path("a/results.csv")), slurp(path("b/results.csv")));
}

TEST_F(CliTest, BenchInvalidMethodListsValidOnes) {
  run({"generate", "--kind", "pure_homophily", "--groups", "2", "--group-size", "4", "--out", path("ph")});
  const auto r = run({"bench", "--manifest", path("ph/manifest.txt"), "--methods", "lp1,gat"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mlp, lp1, lp2, link, sgc1, sgc2, cs1, cs2"), std::string::npos) << r.err;
}

TEST_F(CliTest, BenchMethodFailureExitsOneKeepingPartialResults) {
  run({"generate", "--kind", "pure_homophily", "--groups", "2", "--group-size", "4", "--out", path("ph")});
  const auto r =
      run({"bench", "--manifest", path("ph/manifest.txt"), "--methods", "lp1,mlp", "--splits", "2", "--out", path("b")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mlp"), std::string::npos);
  const auto csv = slurp(path("b/results.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(CliTest, BenchGridFile) {
  run({"generate", "--kind", "pure_homophily", "--groups", "2", "--group-size", "6", "--out", path("ph")});
  std::ofstream(path("grid.json")) << R"({"lp": {"alpha": [0.5]}})";
  const auto r = run({"bench", "--manifest", path("ph/manifest.txt"), "--methods", "lp2", "--grid", path("grid.json"),
                      "--splits", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ofstream(path("bad.json")) << "{nope";
  EXPECT_EQ(run({"bench", "--manifest", path("ph/manifest.txt"), "--grid", path("bad.json")}).code, 1);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"analyze"}).code, 2);
  EXPECT_EQ(run({"bench", "--manifest", "x", "--threads", "many"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MissingManifestIsDomainError) {
  const auto r = run({"analyze", "--manifest", path("nope.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.txt"), std::string::npos);
}

}  // namespace
}  // namespace homophily
