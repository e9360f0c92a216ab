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
#include <array>
#include <cstdint>
#include <string_view>

#include "qitekit/hamiltonians.hpp"
#include "qitekit/statevector.hpp"

namespace qitekit {

/// Dense eigendecomposition, eigenvalues ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

SpectralDecomposition spectral_decomposition(const Hamiltonian& h,
                                             int max_qubits = Limits{}.max_qubits);

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

GroundState exact_ground(const Hamiltonian& h, int max_qubits = Limits{}.max_qubits);
GroundState exact_ground(const SpectralDecomposition& spectrum);

/// Normalized e^{-beta H}|psi0>. If psi0 has no weight on the ground space
/// the result converges to the lowest eigenvector it does overlap.
StateVector exact_ite(const StateVector& psi0, const Hamiltonian& h, double beta);
StateVector exact_ite(const StateVector& psi0, const SpectralDecomposition& spectrum, double beta);

/// Tr[O e^{-beta H}] / Tr[e^{-beta H}].
double gibbs_average(const Hamiltonian& h, const PauliSum& o, double beta);
double gibbs_average(const SpectralDecomposition& spectrum, const Eigen::MatrixXcd& o, double beta);

/// -Tr rho ln rho, eigenvalues below 1e-14 dropped.
double von_neumann_entropy(const DensityMatrix& rho);

/// I(i, j) = S(i) + S(j) - S(i, j) in nats.
double mutual_information(const StateVector& state, int i, int j);

/// Probability of measuring a string whose cut value equals `c_max`.
double maxcut_success(const StateVector& state, const Hamiltonian& maxcut_h, int c_max);

/// Inputs of the Pauli-expectation count for a QITE run.
struct CostQuery {
  int k = 1;              // terms in the Hamiltonian
  int t = 1;              // Trotter steps
  int d = 1;              // domain size
  bool odd_y = false;     // count only odd-Y strings
  int trotter_order = 2;  // 2 visits 2K - 1 factors per step, 1 visits K
};

/// factors_per_step * T * (4^D, or y(D) with odd_y).
std::uint64_t qite_measurement_count(const CostQuery& q);

/// VQE measurement counts used as reference values in reports.
struct VqeReference {
  std::string_view system;
  int sites;
  std::uint64_t count;
};

inline constexpr std::array<VqeReference, 4> kVqeReferenceCounts = {{
    {"heisenberg_field_1d", 4, 25'600},
    {"heisenberg_field_1d", 6, 403'200},
    {"tfi_afm_1d", 4, 12'800},
    {"tfi_afm_1d", 6, 69'360},
}};

}  // namespace qitekit
