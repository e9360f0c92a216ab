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

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qitekit {

using cplx = std::complex<double>;

/// Single-qubit Pauli letter. The numeric order I < X < Y < Z is the
/// lexicographic order used by pool enumeration.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Phase-free tensor product of Pauli letters over `n_qubits` qubits.
///
/// Stored in symplectic form: bit q of `x_mask` is set for X or Y on qubit q,
/// bit q of `z_mask` for Z or Y. Acting on a computational basis state,
///
///     P |i> = i^{#Y} (-1)^{popcount(i & z_mask)} |i ^ x_mask>,
///
/// which is what the statevector kernels use directly. At most 63 qubits.
class PauliString {
 public:
  static constexpr int kMaxQubits = 63;

  PauliString() = default;
  explicit PauliString(int n_qubits);
  PauliString(int n_qubits, std::initializer_list<std::pair<int, Pauli>> letters);

  /// Parses a sparse form such as "X0 Z2 Y5" or "I".
  static PauliString parse(int n_qubits, std::string_view text);
  /// Dense form: character k is the letter on qubit k, e.g. "XIZ".
  static PauliString from_dense(std::string_view letters);
  static PauliString from_masks(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  Pauli at(int qubit) const;
  void set(int qubit, Pauli p);

  bool is_identity() const { return (x_ | z_) == 0; }
  int weight() const;
  int y_count() const;
  /// Qubits carrying a non-identity letter, ascending.
  std::vector<int> support() const;
  std::map<int, Pauli> letters() const;

  /// Sparse text form, "I" for the identity.
  std::string str() const;
  /// Dense text form over all qubits, qubit 0 first.
  std::string dense_str() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// Element of the Pauli group: i^phase_power * string.
struct PhasedPauli {
  int phase_power = 0;  // in {0, 1, 2, 3}
  PauliString string;

  cplx phase() const;
  friend bool operator==(const PhasedPauli&, const PhasedPauli&) = default;
};

/// Group product a·b with its accumulated phase.
PhasedPauli multiply(const PauliString& a, const PauliString& b);

/// Real-weighted sum of Pauli strings; Hermitian by construction.
struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  static PauliSum single(const PauliString& s, double coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Appends, merging with an existing identical string.
  void add(double coeff, const PauliString& s);
  void add(const PauliSum& other, double scale = 1.0);
  /// Drops terms with |coeff| <= tol.
  void prune(double tol = 0.0);

  /// Union of the supports of all strings, ascending.
  std::vector<int> support() const;
  std::string str() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Kind of operator basis used to expand the QITE generator on a domain.
enum class PoolKind { PauliFull, PauliOddY, FermionicNumberConserving };

std::string to_string(PoolKind kind);
PoolKind pool_kind_from_string(std::string_view name);

/// Operator basis on an ordered domain of qubits.
struct OperatorPool {
  PoolKind kind = PoolKind::PauliFull;
  std::vector<int> domain;
  int n_qubits = 0;
};

/// Enumerates the pool as Hermitian operators on the full register.
///
/// Pauli kinds yield one string per element (coefficient 1), ordered
/// lexicographically in I < X < Y < Z with domain[0] as the most significant
/// position. The fermionic kind yields the Jordan-Wigner images of the
/// Hermitian parts of number-conserving products over {1, f, f^dag, f^dag f}
/// (one factor per domain mode), in the same digit order.
std::vector<PauliSum> enumerate_pool(const OperatorPool& pool);

/// Number of D-qubit Pauli strings with an odd number of Y letters.
std::uint64_t odd_y_count(int domain_size);

}  // namespace qitekit
