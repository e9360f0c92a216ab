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

#include "qitekit/analysis.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qitekit/errors.hpp"

namespace qitekit {

namespace {

constexpr double kEntropyCutoff = 1e-14;

Eigen::MatrixXcd dense_sum(const PauliSum& o) {
  Hamiltonian wrapper{.n_qubits = o.n_qubits()};
  wrapper.terms.push_back({o.support(), o});
  return dense_matrix(wrapper);
}

}  // namespace

SpectralDecomposition spectral_decomposition(const Hamiltonian& h, int max_qubits) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h, max_qubits));
  if (es.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

GroundState exact_ground(const SpectralDecomposition& spectrum) {
  return {spectrum.eigenvalues[0], StateVector::from_amplitudes(spectrum.eigenvectors.col(0))};
}

GroundState exact_ground(const Hamiltonian& h, int max_qubits) {
  return exact_ground(spectral_decomposition(h, max_qubits));
}

StateVector exact_ite(const StateVector& psi0, const SpectralDecomposition& spectrum, double beta) {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  if (static_cast<Eigen::Index>(psi0.dim()) != spectrum.eigenvectors.rows()) {
    throw DimensionError("state and Hamiltonian sizes differ");
  }
  if (beta == 0.0) return psi0;
  Eigen::VectorXcd coeffs = spectrum.eigenvectors.adjoint() * psi0.amplitudes();
  // Shift by the lowest occupied level so the weights cannot underflow.
  double shift = spectrum.eigenvalues[spectrum.eigenvalues.size() - 1];
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    if (std::abs(coeffs[k]) > 1e-300) {
      shift = spectrum.eigenvalues[k];
      break;
    }
  }
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= std::exp(-beta * (spectrum.eigenvalues[k] - shift));
  }
  return StateVector::from_amplitudes(spectrum.eigenvectors * coeffs);
}

StateVector exact_ite(const StateVector& psi0, const Hamiltonian& h, double beta) {
  if (beta == 0.0) return psi0;
  return exact_ite(psi0, spectral_decomposition(h), beta);
}

double gibbs_average(const SpectralDecomposition& spectrum, const Eigen::MatrixXcd& o,
                     double beta) {
  if (beta < 0.0) throw DomainError("beta must be non-negative");
  const double e0 = spectrum.eigenvalues[0];
  double z = 0.0;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
    const double w = std::exp(-beta * (spectrum.eigenvalues[k] - e0));
    const auto v = spectrum.eigenvectors.col(k);
    z += w;
    acc += w * v.dot(o * v).real();
  }
  return acc / z;
}

double gibbs_average(const Hamiltonian& h, const PauliSum& o, double beta) {
  return gibbs_average(spectral_decomposition(h), dense_sum(o), beta);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : es.eigenvalues()) {
    if (p > kEntropyCutoff) s -= p * std::log(p);
  }
  return s;
}

double mutual_information(const StateVector& state, int i, int j) {
  if (i == j) throw DomainError("mutual information needs two distinct sites");
  const int qi[1] = {i};
  const int qj[1] = {j};
  const int qij[2] = {i, j};
  return von_neumann_entropy(reduced_density_matrix(state, qi)) +
         von_neumann_entropy(reduced_density_matrix(state, qj)) -
         von_neumann_entropy(reduced_density_matrix(state, qij));
}

double maxcut_success(const StateVector& state, const Hamiltonian& maxcut_h, int c_max) {
  if (maxcut_h.edges.empty()) throw DomainError("Hamiltonian carries no MAXCUT graph");
  if (maxcut_h.n_qubits != state.n_qubits()) throw DimensionError("state and graph sizes differ");
  double p = 0.0;
  for (std::uint64_t z = 0; z < state.dim(); ++z) {
    if (cut_value(maxcut_h.edges, z) == c_max) p += std::norm(state[z]);
  }
  return p;
}

std::uint64_t qite_measurement_count(const CostQuery& q) {
  if (q.k < 1 || q.t < 1 || q.d < 1) throw DomainError("cost query fields must be positive");
  if (q.trotter_order != 1 && q.trotter_order != 2)
    throw DomainError("trotter_order must be 1 or 2");
  const std::uint64_t factors = q.trotter_order == 2 ? 2 * std::uint64_t(q.k) - 1 : q.k;
  if (q.d > 31) throw ResourceError("domain too large to count");
  const std::uint64_t per_factor = q.odd_y ? odd_y_count(q.d) : std::uint64_t{1} << (2 * q.d);
  return factors * std::uint64_t(q.t) * per_factor;
}

}  // namespace qitekit
