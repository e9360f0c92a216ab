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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qitekit/hamiltonians.hpp"
#include "qitekit/qite.hpp"

namespace qitekit {

/// Collapse basis per chain step. kAlternating collapses odd steps in X and
/// even steps in Z (steps counted from 1).
enum class BasisSchedule { kAlternating, kAllZ };

std::string to_string(BasisSchedule s);
BasisSchedule basis_schedule_from_string(std::string_view name);

struct MettsConfig {
  double beta = 1.0;
  /// Propagation settings; n_steps is replaced by beta / (2 dtau).
  QiteConfig qite = default_qite();
  /// Chain length, warmup included.
  int n_samples = 210;
  int n_warmup = 10;
  BasisSchedule schedule = BasisSchedule::kAlternating;
  std::uint64_t seed = 0;

  /// Sweeps needed to reach beta / 2. Throws DomainError unless beta / (2 dtau)
  /// is an integer within 1e-9.
  int propagation_steps() const;
  void validate() const;

  static QiteConfig default_qite();
};

struct MettsSample {
  int step = 0;               // 1-based chain position
  std::string product_label;  // state propagated at this step, qubit 0 first
  Basis basis = Basis::Z;     // basis of product_label
  double value = 0.0;         // <phi|O|phi>
};

/// Runs the chain from a product state with random Z bits drawn from the
/// seed. The observable defaults to H.
std::vector<MettsSample> metts_chain(const Hamiltonian& h, const MettsConfig& config,
                                     const std::optional<PauliSum>& observable = std::nullopt);

struct BlockEstimate {
  double mean = 0.0;
  double stderr_block = 0.0;
  int n_values = 0;  // after discarding warmup
};

/// Flyvbjerg-Petersen blocking. The error is the largest estimate over the
/// levels that still hold at least 8 blocks. Needs 8 values after discard.
BlockEstimate block_error(std::span<const double> values, int discard = 0);

/// Integrated autocorrelation time 1 + 2 sum_t rho(t), summed up to the
/// first window W with W >= 5 tau(W).
double integrated_autocorrelation_time(std::span<const double> values);
/// Same estimate from several equal-length chains. Autocovariances are taken
/// about the grand mean and averaged over chains, so a chain stuck away from
/// the others shows up as slow decorrelation.
double integrated_autocorrelation_time(const std::vector<std::vector<double>>& chains);

std::vector<double> sample_values(const std::vector<MettsSample>& samples);

}  // namespace qitekit
