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
#include <vector>

#include "qitekit/analysis.hpp"
#include "qitekit/hamiltonians.hpp"
#include "qitekit/qite.hpp"

namespace qitekit {

/// Norms and energies recorded along an imaginary-time trajectory.
/// inv_sq_norms[l] = ||e^{-l dtau H}|Psi0>||^2 = 1 / n_l^2 and
/// energies[l] = <Phi_l|H|Phi_l> for the normalized Phi_l.
struct KrylovLedger {
  std::vector<double> inv_sq_norms;
  std::vector<double> energies;

  std::size_t size() const { return energies.size(); }
  /// Throws DomainError unless the lists match, 1/n_0^2 = 1 and every entry
  /// is positive and finite.
  void validate() const;
};

KrylovLedger ledger_from_trajectory(const Trajectory& t);

/// Ledger of exact e^{-l dtau H}|psi0> for l = 0..n_steps.
KrylovLedger exact_ite_ledger(const StateVector& psi0, const SpectralDecomposition& spectrum,
                              double dtau, int n_steps);

/// Multiplies each 1/n_l^2 (l > 0) by exp(sigma xi) and adds sigma xi' to
/// each energy, with independent standard normal xi, xi'.
KrylovLedger perturb_ledger(const KrylovLedger& ledger, double sigma, std::uint64_t seed);

enum class Parity { kEven, kOdd };

/// Overlap and Hamiltonian matrices over the selected Krylov vectors.
struct KrylovMatrices {
  Eigen::MatrixXd s;
  Eigen::MatrixXd h;
  std::vector<int> indices;
};

/// Ledger indices of the given parity up to and including `last`.
std::vector<int> parity_indices(const KrylovLedger& ledger, Parity parity, int last);

/// <Phi_l|Phi_l'> = n_l n_l' / n_r^2 with r = (l + l') / 2, evaluated in the
/// log domain.
double krylov_overlap(const KrylovLedger& ledger, int l, int lp);

/// S_{ll'} and H_{ll'} = S_{ll'} E_r over `indices`, which must share parity.
KrylovMatrices build_matrices(const KrylovLedger& ledger, const std::vector<int>& indices);
/// All indices of the given parity.
KrylovMatrices build_matrices(const KrylovLedger& ledger, Parity parity = Parity::kEven);

/// Greedy selection among `candidates` (ascending): the first is always kept
/// and each later index is accepted when |<Phi_l|Phi_last>| < s.
std::vector<int> stabilize(const KrylovLedger& ledger, double s,
                           const std::vector<int>& candidates);
std::vector<int> stabilize(const KrylovLedger& ledger, double s, Parity parity = Parity::kEven);

struct GevpSolution {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::VectorXd ground;       // coefficients over KrylovMatrices::indices
  int n_retained = 0;           // dimension after the eps projection
};

/// Solves H x = E S x on the span of S eigenvectors with eigenvalue >= eps.
/// Throws NumericalError if none survive.
GevpSolution solve_gevp(const KrylovMatrices& mats, double eps);

struct QlanczosOptions {
  double s = 0.75;
  double eps = 1e-2;
  Parity parity = Parity::kEven;
};

struct QlanczosPoint {
  int step = 0;
  double beta = 0.0;
  double e_qite = 0.0;
  double e_qlanczos = 0.0;
  int n_retained = 0;
};

/// QLanczos estimate for every prefix of the ledger ending at an index of
/// the chosen parity.
std::vector<QlanczosPoint> qlanczos_series(const KrylovLedger& ledger, double dtau,
                                           const QlanczosOptions& options);

struct QlanczosRun {
  Trajectory trajectory;
  std::vector<QlanczosPoint> points;
};

/// Runs qite_evolve and the QLanczos series on its ledger.
QlanczosRun qlanczos_run(const Hamiltonian& h, const StateVector& state0, const QiteConfig& config,
                         const QlanczosOptions& options);

}  // namespace qitekit
