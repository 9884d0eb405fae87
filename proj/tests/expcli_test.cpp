// Copyright 2026 The Slowent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slowent/experiments.hpp"

namespace slowent::expcli {
namespace {

namespace fs = std::filesystem;

std::string usage_message(const Json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig small(Kind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.sample_size = 20;
  cfg.eps.push_back({});
  return cfg;
}

TEST(Config, Defaults) {
  const auto cfg = ExperimentConfig::from_json(Json::object());
  EXPECT_EQ(cfg.kind, Kind::kVerifyAll);
  EXPECT_EQ(cfg.seed, 1u);
  ASSERT_EQ(cfg.eps.size(), 1u);
  EXPECT_EQ(cfg.eps[0].diam, Ratio(1, 4));
  EXPECT_EQ(cfg.schedule.label(), "theta=1/3,c=2");
}

TEST(Config, FieldLevelErrors) {
  EXPECT_NE(usage_message({{"kind", "nope"}}).find("config.kind"), std::string::npos);
  EXPECT_NE(usage_message({{"seed", -4}}).find("config.seed"), std::string::npos);
  EXPECT_NE(usage_message({{"sample_size", 0}}).find("config.sample_size"), std::string::npos);
  EXPECT_NE(usage_message({{"bogus", 1}}).find("config.bogus"), std::string::npos);
  EXPECT_NE(usage_message({{"schedule", {{"theta", "x"}}}}).find("config.schedule.theta"),
            std::string::npos);
  EXPECT_NE(usage_message({{"eps", {{{"diam", "1/4"}}}}}).find("config.eps[0]"),
            std::string::npos);
  EXPECT_NE(usage_message({{"variants", {{{"c", "two"}}}}}).find("config.variants[0].c"),
            std::string::npos);
  EXPECT_NE(usage_message({{"schedule", {{"radii", {1, 28}}, {"file", "x"}}}}).find("not both"),
            std::string::npos);
  EXPECT_NE(usage_message({{"schedule", {{"file", "/nonexistent/s.txt"}}}}).find("not readable"),
            std::string::npos);
  EXPECT_THROW(ExperimentConfig::from_json(Json::array()), UsageError);
}

TEST(Config, JsonRoundTrip) {
  const Json j = {{"kind", "cover-scan"},
                  {"schedule", {{"stages", 3}, {"theta", "1/4"}, {"c", 5}}},
                  {"seed", 99},
                  {"sample_size", 12},
                  {"scales", {1, 2, 3}},
                  {"eps", {{{"diam", "1/5"}, {"mass", "0"}}}}};
  const auto cfg = ExperimentConfig::from_json(j);
  EXPECT_EQ(cfg.kind, Kind::kCoverScan);
  EXPECT_EQ(cfg.schedule.label(), "theta=1/4,c=5");
  const auto back = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json().dump(), cfg.to_json().dump());
}

TEST(Config, LoadWithScheduleFile) {
  const fs::path dir = fs::path(::testing::TempDir()) / "slowent_cfg";
  fs::create_directories(dir);
  std::ofstream(dir / "s.txt") << "theta 1/3\nc 2\nr 1 1\nr 2 28\nr 3 185221\n";
  std::ofstream(dir / "cfg.json") << R"({"kind": "recurrence", "schedule": {"file": "s.txt"}})";
  const auto cfg = ExperimentConfig::load(dir / "cfg.json");
  EXPECT_EQ(cfg.schedule.resolve().r(3), 185221);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(ExperimentConfig::load(dir / "bad.json"), UsageError);
  EXPECT_THROW(ExperimentConfig::load(dir / "missing.json"), UsageError);
}

TEST(Kind, Names) {
  for (Kind k : {Kind::kMetricProps, Kind::kCoverScan, Kind::kRecurrence, Kind::kOverlay,
                 Kind::kRatioEt, Kind::kBowen, Kind::kVerifyAll}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_kind("verify"), UsageError);
}

TEST(RunExperiment, EveryKindDeterministicAcrossThreads) {
  for (Kind k : {Kind::kMetricProps, Kind::kCoverScan, Kind::kRecurrence, Kind::kOverlay,
                 Kind::kRatioEt, Kind::kBowen}) {
    const auto cfg = small(k);
    const std::string one = run_experiment(cfg, 1).to_json().dump(2);
    EXPECT_EQ(one, run_experiment(cfg, 1).to_json().dump(2)) << to_string(k);
    EXPECT_EQ(one, run_experiment(cfg, 4).to_json().dump(2)) << to_string(k);
  }
}

TEST(RunExperiment, VerdictsNameInvariants) {
  for (Kind k : {Kind::kMetricProps, Kind::kRecurrence, Kind::kBowen}) {
    const auto rep = run_experiment(small(k), 2);
    EXPECT_FALSE(rep.verdicts.empty()) << to_string(k);
    for (const auto& v : rep.verdicts) EXPECT_FALSE(v.invariant.empty()) << v.name;
  }
}

TEST(RunExperiment, RecurrenceExhaustiveStageTwo) {
  auto cfg = small(Kind::kRecurrence);
  cfg.stage = 2;
  const auto rep = run_experiment(cfg, 4);
  const Json j = rep.to_json();
  bool found = false;
  for (const auto& v : rep.verdicts) {
    if (v.name == "distinct-patterns") {
      found = true;
      EXPECT_NE(v.detail.find("of 361"), std::string::npos) << v.detail;
    }
  }
  EXPECT_TRUE(found);
}

TEST(VerifyAll, StructureAndDeterminism) {
  ExperimentConfig cfg;
  const auto rep = verify_all(cfg, 1);
  const std::string once = rep.to_json().dump(2);
  EXPECT_EQ(once, verify_all(cfg, 8).to_json().dump(2));
  std::set<std::string> scopes;
  bool broken = false;
  for (const auto& v : rep.verdicts) {
    scopes.insert(v.scope);
    if (v.name == "broken-schedule-rejected") broken = v.status == Status::kPass;
  }
  for (const char* s : {"theta=1/3,c=2", "theta=1/3,c=5", "theta=1/4,c=2", "theta=1/4,c=5"}) {
    EXPECT_TRUE(scopes.count(s)) << s;
  }
  EXPECT_TRUE(broken);
}

TEST(Report, CsvMatchesJsonTables) {
  const auto rep = run_experiment(small(Kind::kCoverScan), 2);
  const fs::path dir = fs::path(::testing::TempDir()) / "slowent_report";
  fs::remove_all(dir);
  rep.write_artifacts(dir);
  ASSERT_TRUE(fs::exists(dir / "report.json"));
  std::ifstream in(dir / "report.json");
  const Json j = Json::parse(in);
  EXPECT_EQ(j.dump(), rep.to_json().dump());
  for (const auto& t : rep.tables) {
    std::ifstream csv(dir / (t.name + ".csv"));
    ASSERT_TRUE(csv) << t.name;
    std::ostringstream expect;
    write_table_csv(expect, t);
    std::stringstream got;
    got << csv.rdbuf();
    EXPECT_EQ(got.str(), expect.str());
  }
}

TEST(Report, OkIgnoresReportedRows) {
  Report r;
  r.verdicts.push_back({"global", "x", "inv", Status::kReported, ""});
  EXPECT_TRUE(r.ok());
  r.verdicts.push_back({"global", "y", "inv", Status::kFail, ""});
  EXPECT_FALSE(r.ok());
}

}  // namespace
}  // namespace slowent::expcli
