#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "blipfield/cli.hpp"

namespace fs = std::filesystem;
using blipfield::cli::ExitCode;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = blipfield::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(BLIPFIELD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("blipfield_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST(Cli, CasimirOneDimensional) {
  const auto r = run({"casimir", "--dim", "1", "--D", "1", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["force"].get<double>(), -std::numbers::pi / 12.0, 1e-6 * std::numbers::pi / 12.0);
  EXPECT_EQ(doc["metadata"]["mmax"], "1000000");
  EXPECT_TRUE(doc["divergent_free_part"].get<bool>());
}

TEST(Cli, CasimirThreeDimensionalCsv) {
  const auto r = run({"casimir", "--dim", "3", "--D", "1"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  EXPECT_NE(r.out.find("# mmax=10000\n"), std::string::npos);
  EXPECT_NE(r.out.find("D,energy_correction,force,"), std::string::npos);
  const auto last = r.out.substr(r.out.rfind("\n", r.out.size() - 2) + 1);
  std::vector<double> row;
  std::stringstream ss(last);
  for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
  ASSERT_GE(row.size(), 3u);
  const double expect = -std::numbers::pi * std::numbers::pi / 240.0;
  EXPECT_NEAR(row[2], expect, 1e-8 * std::abs(expect));
}

TEST(Cli, CasimirSweepAndImageRoute) {
  const auto r = run({"casimir", "--dim", "1", "--D", "0.5,1,2", "--eps-ladder", "0.04,0.02,0.01",
                      "--mmax", "100000", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 3u);
  for (const auto& row : doc["results"])
    EXPECT_NEAR(row["image_route_energy"].get<double>(), row["energy_correction"].get<double>(),
                1e-5 * std::abs(row["energy_correction"].get<double>()));
}

TEST(Cli, CasimirOracle) {
  const auto r = run({"casimir", "--dim", "1", "--D", "1", "--oracle", "--oracle-ntrunc", "6",
                      "--oracle-points", "40", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  EXPECT_LT(nlohmann::json::parse(r.out)["image_oracle_discrepancy"].get<double>(), 1e-8);
}

TEST(Cli, FermiBlip) {
  const auto r = run({"fermi", "--model", "blip", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_LT(doc["ratio_spread"].get<double>(), 1e-8);
  EXPECT_LT(doc["early_click_mass"].get<double>(), 1e-10);
  EXPECT_EQ(doc["table"]["t1"].size(), 6u);
  EXPECT_EQ(doc["metadata"]["model"], "blip");
  EXPECT_EQ(doc["metadata"]["grid"], "256,4096");
}

TEST(Cli, FermiStandard) {
  const auto r = run({"fermi", "--model", "standard", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_GT(doc["ratio_spread"].get<double>(), 1e-3);
  EXPECT_GT(doc["early_click_mass"].get<double>(), 1e-6);
}

TEST(Cli, PropagateTable) {
  const auto r = run({"propagate", "--model", "blip", "--packet", "gaussian:0,1,2", "--grid", "64,512",
                      "--times", "0,1.5"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  EXPECT_NE(r.out.find("t,x,abs2,re,im\n"), std::string::npos);
  std::size_t rows = 0;
  std::stringstream ss(r.out);
  for (std::string line; std::getline(ss, line);)
    if (!line.empty() && line[0] != '#' && line[0] != 't') ++rows;
  EXPECT_EQ(rows, 2u * 512u);
}

TEST(Cli, PropagateJsonSummaries) {
  const auto r = run({"propagate", "--model", "standard", "--packet", "gaussian:0,1,0", "--grid", "64,512",
                      "--times", "0,3", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_TRUE(doc.contains("blocks"));
  for (const auto& b : doc["blocks"]) EXPECT_NEAR(b["norm"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, KernelAndCavityAndImages) {
  auto r = run({"kernel", "--dim", "1", "--delta", "1", "--eps", "0.01", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  r = run({"cavity-field", "--points", "256", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["table"]["x"].size(), 127u);
  r = run({"images-oracle", "--D", "1", "--ntrunc", "6", "--points", "40", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::ok) << r.err;
  EXPECT_LT(nlohmann::json::parse(r.out)["discrepancy"].get<double>(), 1e-8);
}

TEST(Cli, ValidationErrors) {
  EXPECT_EQ(run({"casimir", "--dim", "2"}).code, ExitCode::validation);
  EXPECT_EQ(run({"casimir"}).code, ExitCode::validation);
  EXPECT_EQ(run({"casimir", "--dim", "1", "--D", "-1"}).code, ExitCode::validation);
  EXPECT_EQ(run({"casimir", "--dim", "1", "--mmax", "5"}).code, ExitCode::validation);
  EXPECT_EQ(run({"propagate", "--grid", "64,500"}).code, ExitCode::validation);
  EXPECT_EQ(run({"propagate", "--times", "-1"}).code, ExitCode::validation);
  EXPECT_EQ(run({"propagate", "--packet", "lorentz:0,1,0"}).code, ExitCode::validation);
  EXPECT_EQ(run({"fermi", "--alpha", "0"}).code, ExitCode::validation);
  EXPECT_EQ(run({"fermi", "--bogus"}).code, ExitCode::validation);
  EXPECT_EQ(run({"images-oracle", "--ntrunc", "2"}).code, ExitCode::validation);
  EXPECT_EQ(run({}).code, ExitCode::validation);
  const auto r = run({"casimir", "--dim", "1", "--D", "0"});
  EXPECT_NE(r.err.find("invalid_argument"), std::string::npos);
}

TEST(Cli, VersionAndHelp) {
  auto r = run({"--version"});
  EXPECT_EQ(r.code, ExitCode::ok);
  EXPECT_NE(r.out.find("1.0.0"), std::string::npos);
  r = run({"casimir", "--help"});
  EXPECT_EQ(r.code, ExitCode::ok);
}

TEST_F(TempDir, ByteIdenticalFiles) {
  for (const char* ext : {".csv", ".json"}) {
    const fs::path p = dir / (std::string("run") + ext);
    const std::string args = "fermi --model standard --t1 30,33,36 --out " + p.string();
    ASSERT_EQ(run_binary(args), ExitCode::ok);
    const std::string first = slurp(p);
    ASSERT_EQ(run_binary(args), ExitCode::ok);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, slurp(p));
  }
}

TEST_F(TempDir, FormatFollowsExtension) {
  const fs::path p = dir / "out.json";
  ASSERT_EQ(run({"casimir", "--dim", "1", "--out", p.string()}).code, ExitCode::ok);
  const auto doc = nlohmann::json::parse(slurp(p));
  EXPECT_EQ(doc["metadata"]["format"], "json");
  EXPECT_EQ(doc["metadata"]["out"], p.string());
}

TEST_F(TempDir, MetadataEmbedsResolvedDefaults) {
  const fs::path p = dir / "run.csv";
  ASSERT_EQ(run({"fermi", "--out", p.string()}).code, ExitCode::ok);
  const std::string text = slurp(p);
  for (const char* key : {"# tool=blipfield 1.0.0\n", "# command=fermi\n", "# model=blip\n", "# hbar=1\n",
                          "# c=1\n", "# eps0=1\n", "# area=1\n", "# L1=10\n", "# L2=40\n", "# width=12\n",
                          "# packet=gaussian:-20,1,1\n"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

TEST_F(TempDir, ExitCodesOfTheBinary) {
  EXPECT_EQ(run_binary("casimir --dim 1"), ExitCode::ok);
  EXPECT_EQ(run_binary("casimir --dim 2"), ExitCode::validation);
  EXPECT_EQ(run_binary("casimir --dim 1 --out " + (dir / "missing" / "x.csv").string()), ExitCode::io);
}
