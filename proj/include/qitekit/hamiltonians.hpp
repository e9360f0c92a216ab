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
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qitekit/pauli.hpp"
#include "qitekit/statevector.hpp"

namespace qitekit {

/// One Trotter factor h[m]: a real-weighted Pauli sum whose strings act only
/// on `support`. Identity components are kept in the term.
struct LocalTerm {
  std::vector<int> support;
  PauliSum op;
};

using Edge = std::pair<int, int>;

/// Ordered list of local terms. The order is the Trotter sweep order.
struct Hamiltonian {
  int n_qubits = 0;
  std::vector<LocalTerm> terms;
  double offset = 0.0;  // constant not carried by any term
  std::string model;
  std::map<std::string, double> params;
  std::vector<Edge> edges;  // MAXCUT graph, empty for other models
  std::vector<std::string> warnings;

  std::size_t size() const { return terms.size(); }
  /// Largest term support.
  int max_support() const;
  /// True when every string has an even number of Y letters, i.e. the
  /// matrix is real in the computational basis.
  bool is_real() const;
  /// All terms merged into one sum; the offset is not included.
  PauliSum total() const;
};

/// Sum of term expectations plus the offset.
double energy(const StateVector& state, const Hamiltonian& h);

/// Dense 2^n x 2^n matrix including the offset.
Eigen::MatrixXcd dense_matrix(const Hamiltonian& h, int max_qubits = Limits{}.max_qubits);

/// alpha X + beta Z on one qubit.
Hamiltonian one_qubit_field(double alpha, double beta);

/// J sum_<ij> S_i.S_j + B sum_i Z_i with S = sigma/2 and open boundaries.
/// Bonds left to right, then one field term per site when B != 0.
Hamiltonian heisenberg_1d(int n, double j, double b);

/// sum_{i<j} S_i.S_j / (|i-j| + 1), pairs in lexicographic order.
Hamiltonian heisenberg_long_range(int n);

/// J sum_<ij> Z_i Z_j + h sum_i X_i, open boundaries. Bonds left to right,
/// then one field term per site when h != 0.
Hamiltonian tfi_1d(int n, double j, double h);

/// Jordan-Wigner 1D Hubbard chain with unit hopping on 2 * n_sites qubits,
/// spin orbitals ordered (0 up, 0 down, 1 up, ...). Terms: hoppings on
/// {p, p+1, p+2} for p = 0 .. 2n-3, then on-site U n_up n_down, then
/// mu n_p when mu != 0.
Hamiltonian hubbard_1d_jw(int n_sites, double u, double mu = 0.0);

/// Two-qubit Bravyi-Kitaev hydrogen Hamiltonian
/// g0 + g1 Z0 + g2 Z1 + g3 Z0 Z1 + g4 X0 X1 + g5 Y0 Y1 as a single term,
/// with g0 carried as the offset.
Hamiltonian h2_bk(const std::array<double, 6>& g);

struct H2Geometry {
  double bond_length = 0.0;   // angstrom
  std::array<double, 6> g{};  // hartree
};

/// Reads rows "R g0 g1 g2 g3 g4 g5"; '#' starts a comment.
std::vector<H2Geometry> load_h2_table(const std::filesystem::path& path);
/// Row whose bond length matches `r` within 1e-9.
H2Geometry find_h2_geometry(const std::vector<H2Geometry>& table, double r);

/// -sum_{(ij) in E} (1 - Z_i Z_j) / 2, one term per edge in input order.
Hamiltonian maxcut(const std::vector<Edge>& edges, int n_vertices);

/// Number of edges cut by computational basis state `z`.
int cut_value(const std::vector<Edge>& edges, std::uint64_t z);

}  // namespace qitekit
