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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qitekit/pauli.hpp"

namespace qitekit {

/// Limits shared by the dense kernels. Defaults size the acceptance suite
/// to run on a laptop.
struct Limits {
  int max_qubits = 14;
  int max_domain_qubits = 12;
  int max_rdm_qubits = 8;
};

/// Dense 2^n amplitude vector. Qubit 0 is the least significant bit of the
/// amplitude index.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on `n_qubits` qubits.
  explicit StateVector(int n_qubits, int max_qubits = Limits{}.max_qubits);

  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Product state from a label with one character per qubit, qubit 0 first:
  /// '0', '1' (Z basis) or '+', '-' (X basis).
  static StateVector product(std::string_view label);
  static StateVector from_amplitudes(Eigen::VectorXcd amplitudes, bool normalize = true);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  cplx operator[](std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amps_.norm(); }
  /// Rescales to unit norm and returns the previous norm.
  double normalize();

 private:
  int n_qubits_ = 0;
  Eigen::VectorXcd amps_;
};

/// Reduced state of a subset of qubits. Local index bit j refers to qubits[j].
struct DensityMatrix {
  Eigen::MatrixXcd entries;
  std::vector<int> qubits;
};

// Pauli application and expectations.

/// out = P * in over the full register.
void apply_pauli(const PauliString& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out);
/// out = A * in for a real-weighted Pauli sum.
void apply_pauli_sum(const PauliSum& a, const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

/// <bra| P |ket>.
cplx matrix_element(const StateVector& bra, const PauliString& p, const StateVector& ket);
/// <state| P |state>; Pauli strings are Hermitian so this is real.
double expectation(const StateVector& state, const PauliString& p);
double expectation(const StateVector& state, const PauliSum& a);

/// Dense matrix of a Pauli sum restricted to `qubits` (local bit j = qubits[j]).
/// Every string must act inside `qubits`.
Eigen::MatrixXcd local_matrix(const PauliSum& a, std::span<const int> qubits);

/// Applies a dense 2^k x 2^k matrix to the listed qubits in place.
void apply_local_matrix(StateVector& state, std::span<const int> qubits,
                        const Eigen::MatrixXcd& matrix);

/// Result of a normalized imaginary-time step on one local term.
struct TermExpResult {
  StateVector state;  // e^{-dtau h}|psi> / ||.||
  double c = 1.0;     // <psi| e^{-2 dtau h} |psi>
};

/// Exact non-unitary step e^{-dtau h}|psi>, renormalized. `h_local` is the
/// term's dense matrix on `support`; it must be Hermitian to 1e-10.
TermExpResult apply_term_exp(const StateVector& state, std::span<const int> support,
                             const Eigen::MatrixXcd& h_local, double dtau);
TermExpResult apply_term_exp(const StateVector& state, const PauliSum& h, double dtau);

/// Applies exp(-i dtau A) on `domain`, where A is a real-weighted Pauli sum
/// acting inside the domain.
StateVector apply_domain_unitary(const StateVector& state, const PauliSum& a,
                                 std::span<const int> domain, double dtau,
                                 int max_domain_qubits = Limits{}.max_domain_qubits);

DensityMatrix reduced_density_matrix(const StateVector& state, std::span<const int> qubits,
                                     int max_qubits = Limits{}.max_rdm_qubits);

enum class Basis : char { Z = 'Z', X = 'X' };

struct Measurement {
  /// One character per qubit, qubit 0 first: '0'/'1' for Z, '+'/'-' for X.
  std::string label;
  StateVector collapsed;
};

/// Samples a product state of the given per-qubit bases with probability
/// |<i'|psi>|^2 and returns it.
Measurement measure_collapse(const StateVector& state, std::span<const Basis> bases,
                             std::mt19937_64& rng);

/// Uniform double in [0, 1) from 53 random bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

cplx inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace qitekit
