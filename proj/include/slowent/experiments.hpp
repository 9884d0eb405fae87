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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowent/cutstack.hpp"
#include "slowent/ratio.hpp"

namespace slowent::expcli {

using Json = nlohmann::ordered_json;

/// Explicit radii, a schedule file, or the greedy rule.
struct ScheduleSpec {
  std::optional<std::vector<BigInt>> radii;
  std::string file;
  int stages = 4;
  Ratio theta{1, 3};
  std::int64_t c = 2;
  BigInt r1 = 1;

  [[nodiscard]] cutstack::Schedule resolve() const;  // unvalidated
  [[nodiscard]] std::string label() const;
  [[nodiscard]] Json to_json() const;
  static ScheduleSpec from_json(const Json& j, const std::string& where,
                                const std::filesystem::path& base_dir);
};

struct EpsPair {
  Ratio diam{1, 4};
  Ratio mass{1, 10};
};

enum class Kind { kMetricProps, kCoverScan, kRecurrence, kOverlay, kRatioEt, kBowen, kVerifyAll };
std::string to_string(Kind k);
Kind parse_kind(const std::string& s);

struct ExperimentConfig {
  Kind kind = Kind::kVerifyAll;
  ScheduleSpec schedule;
  std::uint64_t seed = 1;
  std::int64_t sample_size = 100;
  int stage = 3;
  std::vector<std::int64_t> scales;  // empty: defaults per kind
  std::vector<EpsPair> eps;          // empty: {1/4, 1/10}
  std::vector<ScheduleSpec> variants;  // verify-all; empty: theta x c grid
  bool include_broken = true;

  static ExperimentConfig from_json(const Json& j, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
  [[nodiscard]] Json to_json() const;
};

enum class Status { kPass, kFail, kReported };
std::string to_string(Status s);

struct Verdict {
  std::string scope;      // schedule variant or "global"
  std::string name;
  std::string invariant;  // what was tested
  Status status = Status::kReported;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  Json config;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  std::vector<std::string> notes;

  /// No asserted verdict failed.
  [[nodiscard]] bool ok() const;
  [[nodiscard]] Json to_json() const;
  /// report.json plus one CSV per table.
  void write_artifacts(const std::filesystem::path& dir) const;
};

void write_table_csv(std::ostream& os, const Table& t);

/// Thread count changes speed only; reports are identical.
Report run_experiment(const ExperimentConfig& config, unsigned threads = 1);

Report verify_all(const ExperimentConfig& config, unsigned threads = 1);

}  // namespace slowent::expcli
