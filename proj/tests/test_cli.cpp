#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "collective/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "collective");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = collective::cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "collective-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, CondorcetWritesFullGrid) {
  const auto path = scratch("s.csv");
  const auto r = run({"condorcet", "--n-max", "100", "--p-step", "0.01", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(path);
  EXPECT_EQ(count_lines(text), 10101u);  // header + 10100 cells
  EXPECT_EQ(text.substr(0, 16), "p,n,probability\n");
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("n-max = 100"), std::string::npos);
}

TEST(Cli, ZeroStepIsUsageError) {
  const auto r = run({"ddd", "--k-step", "0", "--networks", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("k step must be positive"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"market", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"condorcet", "--tie-rule", "sometimes"}).code, 2);
  EXPECT_EQ(run({"condorcet", "--preset", "fig7"}).code, 2);
  EXPECT_EQ(run({"preset", "fig9"}).code, 2);
}

TEST(Cli, MarketExampleReport) {
  const auto r = run({"market-example"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final market: [0.5, 0.5, 0.4]"), std::string::npos);
  EXPECT_NE(r.out.find("final market: [0.7, 0.6, 0.7]"), std::string::npos);
  EXPECT_NE(r.out.find("error (mean-squared): 0.287"), std::string::npos);
  EXPECT_NE(r.out.find("error (mean-squared): 0.113"), std::string::npos);
}

TEST(Cli, HelpListsPresets) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* word : {"fig2", "fig4", "fig5", "fig7", "fig8", "condorcet", "market-example"})
    EXPECT_NE(r.out.find(word), std::string::npos) << word;
  const auto sub = run({"ddd", "--help"});
  EXPECT_EQ(sub.code, 0);
  for (const char* flag : {"--citizens", "--networks", "--beta", "--k-step", "--epsilon", "--threads", "--scale"})
    EXPECT_NE(sub.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, MissingSeedIsChosenAndPrinted) {
  const auto r = run({"ddd", "--networks", "1", "--k-min", "100", "--k-max", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("seed = "), std::string::npos);
  const auto pos = r.err.find("seed = ") + 7;
  const auto seed = r.err.substr(pos, r.err.find('\n', pos) - pos);
  EXPECT_FALSE(seed.empty());
}

TEST(Cli, SameSeedSameBytesAnyThreadCount) {
  const std::vector<std::string> base{"ddd", "--networks", "6", "--k-min", "10", "--k-max", "90", "--k-step", "40",
                                      "--seed", "31"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const auto ra = run(a), rb = run(b);
  ASSERT_EQ(ra.code, 0);
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(count_lines(ra.out), 4u);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg_path = scratch("run.cfg");
  {
    std::ofstream cfg(cfg_path);
    cfg << "citizens = 40\nreps = 2\ndims = 4\np-min = 0.5\np-max = 0.5\nseed = 8\n";
  }
  const auto r = run({"market", "--config", cfg_path.string(), "--dims", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("citizens = 40"), std::string::npos);
  EXPECT_NE(r.err.find("dims = 6"), std::string::npos);
  EXPECT_EQ(count_lines(r.out), 2u);

  const auto missing = run({"market", "--config", scratch("nope.cfg").string()});
  EXPECT_EQ(missing.code, 2);
}

TEST(Cli, PresetWithScale) {
  const auto r = run({"preset", "fig4", "--scale", "500", "--seed", "1", "--threads", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 101u);
  EXPECT_NE(r.err.find("effective replications: 2"), std::string::npos);
  const auto sub = run({"ddd", "--preset", "fig5", "--scale", "1000", "--seed", "1", "--threads", "1"});
  ASSERT_EQ(sub.code, 0) << sub.err;
  EXPECT_EQ(count_lines(sub.out), 101u);
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
  const auto r = run({"condorcet", "--n-max", "2", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/nonexistent-dir/x.csv"), std::string::npos);
}

TEST(Cli, NetworkEdgeList) {
  const auto r = run({"network", "--citizens", "20", "--m", "2", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 42), "source,target,raw_weight,normalized_weight");
  // m + 1 mutual founders, then 2 links per later arrival, each reciprocated
  EXPECT_EQ(count_lines(r.out), 1u + 3u * 2u + 17u * 2u * 2u);
  const auto directed = run({"network", "--citizens", "20", "--m", "2", "--seed", "4", "--links", "directed"});
  ASSERT_EQ(directed.code, 0) << directed.err;
  EXPECT_EQ(count_lines(directed.out), 1u + 20u * 2u);
  EXPECT_EQ(run({"network", "--links", "sideways"}).code, 2);
}
