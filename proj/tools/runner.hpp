// Copyright 2026 The qitekit Authors
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
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace qitekit::cli {

struct RunOptions {
  std::filesystem::path out;  // run directory; empty selects config output or runs/<stem>
  std::optional<std::uint64_t> seed_override;
  int max_qubits = Limits{}.max_qubits;
};

struct RunResult {
  std::filesystem::path dir;
  nlohmann::ordered_json summary;
};

/// Validates everything that can be checked without computing, then creates
/// the run directory and writes config.yaml, manifest.json, the series CSVs
/// and summary.json. Errors raised before the directory exists leave
/// nothing behind.
RunResult run_experiment(ExperimentConfig cfg, const RunOptions& options);

/// Simple CSV table; every value kept as text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

Table read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Table& table);

/// Formats with 17 significant digits so values round-trip exactly.
std::string format_number(double v);

struct CompareReport {
  Table table;
  double max_abs_delta = 0.0;
  int violations = 0;  // variational-bound or QLanczos-ordering failures
};

/// One directory: per-beta deltas against the dense oracle. Two
/// directories: per-beta deltas between the runs, which must share the model
/// and algorithm.
CompareReport compare_runs(const std::vector<std::filesystem::path>& dirs, int max_qubits);

}  // namespace qitekit::cli
