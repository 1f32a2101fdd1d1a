// Copyright 2026 The DCN Authors
// SPDX-License-Identifier: Apache-2.0

#include "dcn/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace dcn::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dcn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dcn_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcn_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

const std::string kScenarios = DCN_SOURCE_DIR "/scenarios/";
const std::string kData = DCN_SOURCE_DIR "/tests/data/";

TEST(Cli, ScenarioRunExitsZeroAndWritesReports) {
  const auto dir = temp_dir("ok");
  const auto r = run({"run", "--scenario", kScenarios + "async_scenario_b.json", "--seeds", "3",
                      "--jobs", "2", "--out", dir.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("3 runs, 0 violations, PASS"), std::string::npos) << r.out;
  const std::string reports = slurp(dir / "reports.jsonl");
  EXPECT_EQ(std::count(reports.begin(), reports.end(), '\n'), 3);
  EXPECT_NE(reports.find("\"seed\":3"), std::string::npos);
  EXPECT_NE(slurp(dir / "summary.json").find("\"passed\":true"), std::string::npos);
}

TEST(Cli, OutputIsIndependentOfJobs) {
  const auto a = temp_dir("jobs1"), b = temp_dir("jobs3");
  const std::string scen = kScenarios + "async_random_equivocate.json";
  ASSERT_EQ(run({"run", "--scenario", scen, "--seeds", "4", "--jobs", "1", "--out",
                 a.string(), "--format", "csv"})
                .code,
            kExitOk);
  ASSERT_EQ(run({"run", "--scenario", scen, "--seeds", "4", "--jobs", "3", "--out",
                 b.string(), "--format", "csv"})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(a / "reports.csv"), slurp(b / "reports.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Cli, BadScenarioExitsTwoWithFieldPath) {
  auto r = run({"run", "--scenario", kData + "bad_budget.json"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("adversary.corrupted"), std::string::npos) << r.err;

  r = run({"run", "--scenario", kData + "unknown_field.json"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("user.colour"), std::string::npos) << r.err;

  r = run({"run", "--scenario", kData + "does_not_exist.json"});
  EXPECT_EQ(r.code, kExitConfig);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"run"}).code, kExitConfig);
  EXPECT_EQ(run({"run", "--suite", "no-such-suite"}).code, kExitConfig);
  EXPECT_EQ(run({"run", "--suite", "theorem1", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(run({"complexity", "--spreads", "1,two"}).code, kExitConfig);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("run"), std::string::npos);
}

TEST(Cli, ViolationsExitOne) {
  // A log whose outputs disagree, checked offline.
  const auto dir = temp_dir("bad_log");
  fs::create_directories(dir);
  ASSERT_EQ(run({"run", "--scenario", kScenarios + "async_scenario_b.json", "--out",
                 dir.string(), "--logs"})
                .code,
            kExitOk);
  fs::path log;
  for (const auto& e : fs::directory_iterator(dir / "logs")) log = e.path();
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(run({"check", "--log", log.string()}).code, kExitOk);

  std::string text = slurp(log);
  const std::string key = "\"kind\":\"TA_OUTPUT\"";
  const auto at = text.find(key);
  ASSERT_NE(at, std::string::npos);
  const auto a_pos = text.find("\"a\":", at);
  const auto comma = text.find(',', a_pos);
  text.replace(a_pos + 4, comma - a_pos - 4, "99");
  std::ofstream(dir / "tampered.jsonl", std::ios::binary) << text;
  const auto r = run({"check", "--log", (dir / "tampered.jsonl").string()});
  EXPECT_EQ(r.code, kExitViolations);
  EXPECT_NE(r.out.find("agreement"), std::string::npos);
}

TEST(Cli, SuiteRunIsClean) {
  const auto r = run({"run", "--suite", "async-lower-bound", "--seeds", "1"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
}

TEST(Cli, ComplexityPrintsTableAndFit) {
  const auto r =
      run({"complexity", "--suite", "rounds", "--spreads", "1,8,64", "--seeds", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("mean_rounds"), std::string::npos);
  EXPECT_NE(r.out.find("fit sync"), std::string::npos);
  EXPECT_NE(r.out.find("fit async"), std::string::npos);
}

TEST(Cli, ValidatePrintsResolvedScenario) {
  const auto r = run({"validate", "--scenario", kScenarios + "async_scenario_b.json"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("async_adversarial"), std::string::npos);
}

}  // namespace
}  // namespace dcn::cli
