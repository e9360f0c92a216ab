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

#include <array>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qitekit/analysis.hpp"
#include "qitekit/hamiltonians.hpp"
#include "qitekit/qite.hpp"
#include "qitekit/qlanczos.hpp"
#include "qitekit/qmetts.hpp"

namespace qitekit::cli {

/// Schema violation or unreadable config. Messages start with
/// "<file>:<line>:<column>:" when a location is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { kQite, kQlanczos, kQmetts, kMutualInfo, kCount };

std::string to_string(Algorithm a);

struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;
  std::vector<Edge> edges;                 // maxcut
  std::optional<std::array<double, 6>> g;  // h2_bk, inline coefficients
  std::string h2_table;                    // h2_bk, coefficient file
  double bond_length = 0.0;
};

struct ExperimentConfig {
  std::filesystem::path source;
  std::string text;  // raw file contents, copied into the run directory
  Algorithm algorithm = Algorithm::kQite;
  std::optional<ModelSpec> model;
  std::string initial_state;  // empty selects the model default
  std::uint64_t seed = 0;
  std::string output;

  QiteConfig qite;
  bool report_fidelity = true;
  QlanczosOptions qlanczos;
  double ledger_noise = 0.0;
  MettsConfig qmetts;
  std::vector<double> mi_betas;
  CostQuery count;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Effective configuration with defaults filled in.
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Builds the Hamiltonian. Relative coefficient paths resolve against
/// `base_dir`.
Hamiltonian build_model(const ModelSpec& spectrum, const std::filesystem::path& base_dir);

/// Product label used when the config gives none: '+' per qubit for maxcut,
/// '0' otherwise.
std::string default_initial_state(const Hamiltonian& h);

}  // namespace qitekit::cli
