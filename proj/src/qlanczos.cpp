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

#include "qitekit/qlanczos.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qitekit/errors.hpp"

namespace qitekit {

void KrylovLedger::validate() const {
  if (inv_sq_norms.size() != energies.size()) {
    throw DomainError("ledger norm and energy lists differ in length");
  }
  if (energies.empty()) throw DomainError("ledger is empty");
  if (inv_sq_norms[0] != 1.0) throw DomainError("ledger must start with 1/n_0^2 = 1");
  for (std::size_t l = 0; l < size(); ++l) {
    if (!(inv_sq_norms[l] > 0.0) || !std::isfinite(inv_sq_norms[l])) {
      throw DomainError(fmt::format("ledger entry {} has a non-positive norm", l));
    }
    if (!std::isfinite(energies[l])) {
      throw DomainError(fmt::format("ledger entry {} has a non-finite energy", l));
    }
  }
}

KrylovLedger ledger_from_trajectory(const Trajectory& t) {
  KrylovLedger ledger{t.inv_sq_norms, t.energies};
  ledger.validate();
  return ledger;
}

KrylovLedger exact_ite_ledger(const StateVector& psi0, const SpectralDecomposition& spectrum,
                              double dtau, int n_steps) {
  if (!(dtau > 0.0) || n_steps < 0) throw DomainError("need dtau > 0 and n_steps >= 0");
  const Eigen::VectorXd w = (spectrum.eigenvectors.adjoint() * psi0.amplitudes()).cwiseAbs2();
  const Eigen::VectorXd& lam = spectrum.eigenvalues;
  KrylovLedger ledger;
  for (int l = 0; l <= n_steps; ++l) {
    const Eigen::VectorXd p = w.array() * (-2.0 * l * dtau * lam.array()).exp();
    const double q = p.sum();
    ledger.inv_sq_norms.push_back(l == 0 ? 1.0 : q);
    ledger.energies.push_back(p.dot(lam) / q);
  }
  return ledger;
}

KrylovLedger perturb_ledger(const KrylovLedger& ledger, double sigma, std::uint64_t seed) {
  ledger.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  KrylovLedger out = ledger;
  for (std::size_t l = 0; l < out.size(); ++l) {
    if (l > 0) out.inv_sq_norms[l] *= std::exp(sigma * normal(rng));
    out.energies[l] += sigma * normal(rng);
  }
  return out;
}

std::vector<int> parity_indices(const KrylovLedger& ledger, Parity parity, int last) {
  if (last >= static_cast<int>(ledger.size())) throw DomainError("index beyond the ledger");
  std::vector<int> idx;
  for (int l = parity == Parity::kEven ? 0 : 1; l <= last; l += 2) idx.push_back(l);
  return idx;
}

double krylov_overlap(const KrylovLedger& ledger, int l, int lp) {
  if ((l + lp) % 2 != 0) throw Error("Krylov indices of mixed parity");
  const auto& q = ledger.inv_sq_norms;
  const int r = (l + lp) / 2;
  return std::exp(std::log(q[r]) - 0.5 * (std::log(q[l]) + std::log(q[lp])));
}

KrylovMatrices build_matrices(const KrylovLedger& ledger, const std::vector<int>& indices) {
  ledger.validate();
  const auto k = static_cast<Eigen::Index>(indices.size());
  KrylovMatrices m{Eigen::MatrixXd(k, k), Eigen::MatrixXd(k, k), indices};
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      const int l = indices[a];
      const int lp = indices[b];
      const double s = a == b ? 1.0 : krylov_overlap(ledger, l, lp);
      const double e = ledger.energies[(l + lp) / 2];
      m.s(a, b) = m.s(b, a) = s;
      m.h(a, b) = m.h(b, a) = s * e;
    }
  }
  return m;
}

KrylovMatrices build_matrices(const KrylovLedger& ledger, Parity parity) {
  return build_matrices(ledger,
                        parity_indices(ledger, parity, static_cast<int>(ledger.size()) - 1));
}

std::vector<int> stabilize(const KrylovLedger& ledger, double s,
                           const std::vector<int>& candidates) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
  ledger.validate();
  std::vector<int> kept;
  if (candidates.empty()) return kept;
  kept.push_back(candidates.front());
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (std::abs(krylov_overlap(ledger, candidates[i], kept.back())) < s) {
      kept.push_back(candidates[i]);
    }
  }
  return kept;
}

std::vector<int> stabilize(const KrylovLedger& ledger, double s, Parity parity) {
  return stabilize(ledger, s, parity_indices(ledger, parity, static_cast<int>(ledger.size()) - 1));
}

GevpSolution solve_gevp(const KrylovMatrices& mats, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (mats.s.rows() == 0) throw NumericalError("empty Krylov basis");
  if (!mats.s.allFinite() || !mats.h.allFinite()) {
    throw NumericalError("Krylov matrices have non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mats.s);
  if (es.info() != Eigen::Success) throw NumericalError("overlap eigendecomposition failed");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] >= eps) keep.push_back(i);
  }
  if (keep.empty()) {
    throw NumericalError(fmt::format("no overlap eigenvalue reaches eps = {}", eps));
  }
  // Columns u_i / sqrt(lambda_i) make the projected metric the identity.
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd u(mats.s.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    u.col(c) = es.eigenvectors().col(keep[c]) / std::sqrt(es.eigenvalues()[keep[c]]);
  }
  Eigen::MatrixXd hr = u.transpose() * mats.h * u;
  hr = 0.5 * (hr + hr.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(hr);
  if (er.info() != Eigen::Success) throw NumericalError("projected eigenproblem failed");

  GevpSolution sol;
  sol.eigenvalues = er.eigenvalues();
  sol.ground = u * er.eigenvectors().col(0);
  sol.n_retained = static_cast<int>(k);
  return sol;
}

std::vector<QlanczosPoint> qlanczos_series(const KrylovLedger& ledger, double dtau,
                                           const QlanczosOptions& options) {
  ledger.validate();
  std::vector<QlanczosPoint> out;
  const int first = options.parity == Parity::kEven ? 0 : 1;
  for (int l = first; l < static_cast<int>(ledger.size()); l += 2) {
    const auto kept = stabilize(ledger, options.s, parity_indices(ledger, options.parity, l));
    const GevpSolution sol = solve_gevp(build_matrices(ledger, kept), options.eps);
    out.push_back({l, l * dtau, ledger.energies[l], sol.eigenvalues[0], sol.n_retained});
  }
  return out;
}

QlanczosRun qlanczos_run(const Hamiltonian& h, const StateVector& state0, const QiteConfig& config,
                         const QlanczosOptions& options) {
  QlanczosRun run;
  run.trajectory = qite_evolve(state0, h, config);
  run.points = qlanczos_series(ledger_from_trajectory(run.trajectory), config.dtau, options);
  return run;
}

}  // namespace qitekit
