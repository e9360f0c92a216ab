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

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qitekit/hamiltonians.hpp"
#include "qitekit/pauli.hpp"
#include "qitekit/statevector.hpp"

namespace qitekit {

/// How the right-hand side b is formed.
///
/// kMeasurable uses only Pauli expectations of the current state and is
/// first order in dtau. kExactDelta0 uses the emulator's exact propagated
/// state, which makes the reconstructed unitary second order accurate when
/// the domain covers the system.
enum class BMode { kMeasurable, kExactDelta0 };

std::string to_string(BMode mode);
BMode b_mode_from_string(std::string_view name);

struct QiteConfig {
  double dtau = 0.1;
  int n_steps = 10;
  int domain_size = 2;
  double delta = 0.0;
  PoolKind pool_kind = PoolKind::PauliFull;
  int trotter_order = 1;
  BMode b_mode = BMode::kMeasurable;
  double pinv_tol = 1e-8;
  bool include_inv_sqrt_c = true;
  /// Gaussian noise added to every measured Pauli expectation.
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  /// Pools up to this size are solved through the dense S matrix; larger
  /// noiseless pools use the factored solver.
  int dense_pool_limit = 256;
  int max_domain_qubits = Limits{}.max_domain_qubits;
  /// Keep a_coeffs in every StepRecord.
  bool record_coeffs = true;

  double beta() const { return dtau * n_steps; }
  /// Throws DomainError on invalid fields.
  void validate() const;
};

struct StepRecord {
  int term_index = 0;
  double dtau = 0.0;  // step length used (dtau / 2 for symmetric half steps)
  double c = 1.0;     // <Psi|e^{-2 dtau h}|Psi>
  Eigen::VectorXd a_coeffs;
  double residual = 0.0;  // ||(Smat + delta I) a + b||
};

struct Trajectory {
  std::vector<double> betas;         // beta_l = l * dtau, l = 0..n_steps
  std::vector<double> energies;      // E(beta_l), including l = 0
  std::vector<double> inv_sq_norms;  // 1 / n_l^2, first entry 1
  std::vector<StepRecord> steps;
  StateVector final_state;
};

/// Domain of `size` qubits grown around `support`. Contiguous supports grow
/// as one interval, alternating left then right; other supports grow from
/// their two endpoints in turn, each outward first. Growth blocked by a
/// chain end goes to the other side. Result is ascending.
std::vector<int> choose_domain(std::span<const int> support, int size, int n_qubits);

struct LinearSystem {
  Eigen::MatrixXd smat;  // 2 Re S
  Eigen::VectorXd b;
  double c = 1.0;  // norm factor used for b in measurable mode
};

/// Builds Smat and b for one step on `pool` (operators acting inside the
/// domain). Smat_IJ = 2 Re <sigma_I sigma_J>, b_I = 2 Im <sigma_I Psi|Delta>.
LinearSystem build_linear_system(const StateVector& state, const LocalTerm& term,
                                 const std::vector<PauliSum>& pool, BMode mode, double dtau,
                                 bool include_inv_sqrt_c = true);

struct StepSolution {
  Eigen::VectorXd a;
  double residual = 0.0;
};

/// a = pinv(Smat + delta I) (-b); eigenvalues below pinv_tol times the
/// largest are dropped.
StepSolution solve_step(const Eigen::MatrixXd& smat, const Eigen::VectorXd& b, double delta,
                        double pinv_tol);

struct StepResult {
  StateVector state;
  StepRecord record;
};

/// One QITE factor: choose_domain, build and solve the linear system, then
/// apply exp(-i dtau A). `dtau` overrides config.dtau (used for half steps).
StepResult qite_step(const StateVector& state, const Hamiltonian& h, int term_index,
                     const QiteConfig& config, double dtau);
StepResult qite_step(const StateVector& state, const Hamiltonian& h, int term_index,
                     const QiteConfig& config);

/// Called after every sweep with the sweep number and the state.
using SweepObserver = std::function<void(int, const StateVector&)>;

Trajectory qite_evolve(const StateVector& state0, const Hamiltonian& h, const QiteConfig& config,
                       const SweepObserver& observer = {});

}  // namespace qitekit
