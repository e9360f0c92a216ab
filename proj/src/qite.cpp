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

#include "qitekit/qite.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "qitekit/errors.hpp"

namespace qitekit {

namespace {

// Pauli expectations of one state, computed on demand. Noise is drawn the
// first time a string is requested, so repeated lookups see one sample.
class ExpectationTable {
 public:
  ExpectationTable(const StateVector& state, double sigma, std::mt19937_64* rng)
      : state_(state), sigma_(sigma), rng_(rng) {}

  double operator()(const PauliString& p) {
    if (p.is_identity()) return 1.0;
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    double v = expectation(state_, p);
    if (sigma_ > 0.0) v += std::normal_distribution<double>(0.0, sigma_)(*rng_);
    cache_.emplace(p, v);
    return v;
  }

 private:
  const StateVector& state_;
  double sigma_;
  std::mt19937_64* rng_;
  std::unordered_map<PauliString, double, PauliStringHash> cache_;
};

// Exact normalized propagation of the current state by one term.
struct Propagation {
  StateVector state;
  double c = 1.0;
};

Propagation propagate(const StateVector& state, const LocalTerm& term, double dtau) {
  if (term.op.empty()) return {state, 1.0};
  std::vector<int> support = term.op.support();
  if (support.empty()) {
    double c0 = 0.0;
    for (const auto& t : term.op.terms()) c0 += t.coeff;
    return {state, std::exp(-2.0 * dtau * c0)};
  }
  auto r = apply_term_exp(state, support, local_matrix(term.op, support), dtau);
  return {std::move(r.state), r.c};
}

double first_order_c(double dtau, double mean_h) {
  const double c1 = 1.0 - 2.0 * dtau * mean_h;
  if (!(c1 > 0.0)) {
    throw NumericalError(fmt::format(
        "first-order norm factor 1 - 2 dtau <h> = {} is not positive; reduce dtau", c1));
  }
  return c1;
}

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(fmt::format("{} has non-finite entries", what));
}

// Entries at or below this fraction of the largest entry are rounding
// residue of exact zeros and do not couple blocks.
constexpr double kStructuralZero = 1e-10;

// pinv(m) * rhs for symmetric m with eigenvalues below tol times the block's
// largest dropped. The cutoff is applied per block of m decoupled by
// structural zeros, so appending an uncoupled block leaves the others'
// solution unchanged. Eigenvalues at the structural-zero level of the whole
// matrix are always dropped.
Eigen::VectorXd block_pinv_apply(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, double tol) {
  const Eigen::Index n = m.rows();
  const double scale = m.cwiseAbs().maxCoeff();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (scale == 0.0) return out;
  const double floor = kStructuralZero * scale;

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (std::abs(m(i, j)) > kStructuralZero * scale) parent[find(i)] = find(j);
    }
  }
  std::map<Eigen::Index, std::vector<Eigen::Index>> blocks;
  for (Eigen::Index i = 0; i < n; ++i) blocks[find(i)].push_back(i);

  for (const auto& [root, idx] : blocks) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    Eigen::VectorXd r(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      r[a] = rhs[idx[a]];
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = m(idx[a], idx[b]);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    if (es.info() == Eigen::Success) {
      const double top = es.eigenvalues().cwiseAbs().maxCoeff();
      const Eigen::VectorXd proj = es.eigenvectors().transpose() * r;
      Eigen::VectorXd scaled = Eigen::VectorXd::Zero(k);
      for (Eigen::Index q = 0; q < k; ++q) {
        const double lam = es.eigenvalues()[q];
        if (std::abs(lam) > std::max(tol * top, floor)) scaled[q] = proj[q] / lam;
      }
      x = es.eigenvectors() * scaled;
    } else {
      // The tridiagonal QR can stall on heavily clustered spectra.
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double top = svd.singularValues()[0];
      const Eigen::VectorXd proj = svd.matrixU().transpose() * r;
      Eigen::VectorXd scaled = Eigen::VectorXd::Zero(k);
      for (Eigen::Index q = 0; q < k; ++q) {
        const double sv = svd.singularValues()[q];
        if (sv > std::max(tol * top, floor)) scaled[q] = proj[q] / sv;
      }
      x = svd.matrixV() * scaled;
    }
    for (Eigen::Index a = 0; a < k; ++a) out[idx[a]] = x[a];
  }
  return out;
}

LinearSystem table_system(ExpectationTable& table, const StateVector& state, const LocalTerm& term,
                          const std::vector<PauliSum>& pool, BMode mode, double dtau,
                          bool include_inv_sqrt_c, const Propagation* prop) {
  const auto p = static_cast<Eigen::Index>(pool.size());
  LinearSystem sys{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), 1.0};
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      double re = 0.0;
      for (const auto& s : pool[i].terms()) {
        for (const auto& t : pool[j].terms()) {
          PhasedPauli prod = multiply(s.string, t.string);
          if (prod.phase_power % 2 != 0) continue;  // purely imaginary
          const double sign = prod.phase_power == 0 ? 1.0 : -1.0;
          re += s.coeff * t.coeff * sign * table(prod.string);
        }
      }
      sys.smat(i, j) = sys.smat(j, i) = 2.0 * re;
    }
  }

  if (mode == BMode::kMeasurable) {
    double mean_h = 0.0;
    for (const auto& k : term.op.terms()) mean_h += k.coeff * table(k.string);
    sys.c = first_order_c(dtau, mean_h);
    const double scale = include_inv_sqrt_c ? 2.0 / std::sqrt(sys.c) : 2.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      double im = 0.0;
      for (const auto& s : pool[i].terms()) {
        for (const auto& k : term.op.terms()) {
          PhasedPauli prod = multiply(s.string, k.string);
          if (prod.phase_power % 2 == 0) continue;  // purely real
          const double sign = prod.phase_power == 1 ? 1.0 : -1.0;
          im += s.coeff * k.coeff * sign * table(prod.string);
        }
      }
      sys.b[i] = -scale * im;
    }
  } else {
    sys.c = prop->c;
    const Eigen::VectorXcd delta = (prop->state.amplitudes() - state.amplitudes()) / dtau;
    Eigen::VectorXcd v;
    for (Eigen::Index i = 0; i < p; ++i) {
      apply_pauli_sum(pool[i], state.amplitudes(), v);
      sys.b[i] = 2.0 * v.dot(delta).imag();
    }
  }
  check_finite(sys.smat, "S matrix");
  check_finite(sys.b, "b vector");
  return sys;
}

// Solves the same least-squares problem as solve_step without forming S.
// Columns of G are [Re; Im] of -i sigma_I |Psi>, so Smat = 2 G^T G and
// -b = 2 G^T E(Delta). Working in the 2^{n+1}-dimensional row space keeps
// the cost independent of the pool size.
StepSolution factored_solve(const StateVector& state, const LocalTerm& term,
                            const std::vector<PauliSum>& pool, BMode mode, double dtau,
                            bool include_inv_sqrt_c, const Propagation& prop, double delta,
                            double pinv_tol) {
  const auto dim = static_cast<Eigen::Index>(state.dim());
  const auto p = static_cast<Eigen::Index>(pool.size());
  const auto& psi = state.amplitudes();

  Eigen::MatrixXd g(2 * dim, p);
  Eigen::VectorXcd v;
  for (Eigen::Index i = 0; i < p; ++i) {
    apply_pauli_sum(pool[i], psi, v);
    // -i v = Im v - i Re v
    g.col(i).head(dim) = v.imag();
    g.col(i).tail(dim) = -v.real();
  }

  Eigen::VectorXcd target;
  if (mode == BMode::kMeasurable) {
    apply_pauli_sum(term.op, psi, v);
    const double c1 = first_order_c(dtau, psi.dot(v).real());
    target = -v / (include_inv_sqrt_c ? std::sqrt(c1) : 1.0);
  } else {
    target = (prop.state.amplitudes() - psi) / dtau;
  }
  Eigen::VectorXd e(2 * dim);
  e.head(dim) = target.real();
  e.tail(dim) = target.imag();

  Eigen::MatrixXd k(2 * dim, 2 * dim);
  k.noalias() = g * g.transpose();
  check_finite(k, "Gram matrix");
  k *= 2.0;
  k.diagonal().array() += delta;
  const Eigen::VectorXd w = block_pinv_apply(k, 2.0 * e, pinv_tol);
  StepSolution sol;
  sol.a = g.transpose() * w;
  sol.residual = (2.0 * (g.transpose() * (g * sol.a - e)) + delta * sol.a).norm();
  if (!sol.a.allFinite()) throw NumericalError("QITE coefficients are not finite");
  return sol;
}

struct TermPlan {
  std::vector<int> domain;  // every qubit any pool operator touches, ascending
  const std::vector<PauliSum>* pool = nullptr;
};

class Planner {
 public:
  Planner(const Hamiltonian& h, const QiteConfig& cfg) : h_(h), cfg_(cfg) {}

  TermPlan plan(int m) {
    const LocalTerm& term = h_.terms.at(static_cast<std::size_t>(m));
    std::vector<int> domain = choose_domain(term.support, cfg_.domain_size, h_.n_qubits);
    if (static_cast<int>(domain.size()) > cfg_.max_domain_qubits) {
      throw ResourceError(fmt::format("domain of {} qubits exceeds the maximum of {}",
                                      domain.size(), cfg_.max_domain_qubits));
    }
    auto it = pools_.find(domain);
    if (it == pools_.end()) {
      it = pools_.emplace(domain, enumerate_pool({cfg_.pool_kind, domain, h_.n_qubits})).first;
    }
    if (it->second.empty()) throw DomainError("operator pool is empty");
    std::vector<int> effective = domain;
    for (const auto& op : it->second) {
      for (int q : op.support()) effective.push_back(q);
    }
    std::sort(effective.begin(), effective.end());
    effective.erase(std::unique(effective.begin(), effective.end()), effective.end());
    if (static_cast<int>(effective.size()) > cfg_.max_domain_qubits) {
      throw ResourceError(fmt::format("pool support of {} qubits exceeds the maximum of {}",
                                      effective.size(), cfg_.max_domain_qubits));
    }
    return {std::move(effective), &it->second};
  }

 private:
  const Hamiltonian& h_;
  const QiteConfig& cfg_;
  std::map<std::vector<int>, std::vector<PauliSum>> pools_;
};

StepResult run_step(const StateVector& state, const Hamiltonian& h, int m, const QiteConfig& cfg,
                    double dtau, const TermPlan& plan, std::mt19937_64& rng) {
  const LocalTerm& term = h.terms[static_cast<std::size_t>(m)];
  const auto& pool = *plan.pool;
  Propagation prop = propagate(state, term, dtau);

  StepSolution sol;
  const bool dense =
      cfg.noise_sigma > 0.0 || static_cast<std::int64_t>(pool.size()) <= cfg.dense_pool_limit;
  if (dense) {
    ExpectationTable table(state, cfg.noise_sigma, &rng);
    LinearSystem sys =
        table_system(table, state, term, pool, cfg.b_mode, dtau, cfg.include_inv_sqrt_c, &prop);
    sol = solve_step(sys.smat, sys.b, cfg.delta, cfg.pinv_tol);
  } else {
    sol = factored_solve(state, term, pool, cfg.b_mode, dtau, cfg.include_inv_sqrt_c, prop,
                         cfg.delta, cfg.pinv_tol);
  }

  PauliSum a(h.n_qubits);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (sol.a[static_cast<Eigen::Index>(i)] != 0.0)
      a.add(pool[i], sol.a[static_cast<Eigen::Index>(i)]);
  }
  StepResult out{apply_domain_unitary(state, a, plan.domain, dtau, cfg.max_domain_qubits), {}};
  out.state.normalize();
  out.record.term_index = m;
  out.record.dtau = dtau;
  out.record.c = prop.c;
  out.record.residual = sol.residual;
  if (cfg.record_coeffs) out.record.a_coeffs = std::move(sol.a);
  return out;
}

void check_state(const StateVector& state, const Hamiltonian& h) {
  if (state.n_qubits() != h.n_qubits) {
    throw DimensionError(
        fmt::format("state has {} qubits, Hamiltonian {}", state.n_qubits(), h.n_qubits));
  }
  if (h.terms.empty()) throw DomainError("Hamiltonian has no terms");
}

}  // namespace

std::string to_string(BMode mode) {
  return mode == BMode::kMeasurable ? "measurable" : "exact_delta0";
}

BMode b_mode_from_string(std::string_view name) {
  if (name == "measurable") return BMode::kMeasurable;
  if (name == "exact_delta0") return BMode::kExactDelta0;
  throw ParseError(fmt::format("unknown b_mode '{}'", name));
}

void QiteConfig::validate() const {
  if (!(dtau > 0.0) || !std::isfinite(dtau)) throw DomainError("dtau must be positive");
  if (n_steps < 0) throw DomainError("n_steps must be non-negative");
  if (domain_size < 1) throw DomainError("domain_size must be at least 1");
  if (!(delta >= 0.0)) throw DomainError("delta must be non-negative");
  if (trotter_order != 1 && trotter_order != 2) throw DomainError("trotter_order must be 1 or 2");
  if (!(pinv_tol > 0.0) || pinv_tol >= 1.0) throw DomainError("pinv_tol must lie in (0, 1)");
  if (!(noise_sigma >= 0.0)) throw DomainError("noise_sigma must be non-negative");
  if (max_domain_qubits < 1) throw DomainError("max_domain_qubits must be positive");
}

std::vector<int> choose_domain(std::span<const int> support, int size, int n_qubits) {
  if (support.empty()) throw DomainError("term has empty support");
  std::vector<int> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= n_qubits)
    throw DimensionError("support outside register");
  if (size < static_cast<int>(sorted.size())) {
    throw DomainError(
        fmt::format("domain size {} is smaller than the term support {}", size, sorted.size()));
  }
  const int target = std::min(size, n_qubits);
  std::vector<char> in(static_cast<std::size_t>(n_qubits), 0);
  for (int q : sorted) in[static_cast<std::size_t>(q)] = 1;
  int count = static_cast<int>(sorted.size());

  // Nearest free qubit from `from` stepping by `dir`, or -1.
  auto free_towards = [&](int from, int dir) {
    for (int q = from + dir; q >= 0 && q < n_qubits; q += dir) {
      if (!in[static_cast<std::size_t>(q)]) return q;
    }
    return -1;
  };

  const bool contiguous = sorted.back() - sorted.front() + 1 == static_cast<int>(sorted.size());
  struct Seed {
    int lo, hi;
    int next_dir;  // -1 grow left, +1 grow right
    bool alternate;
  };
  std::vector<Seed> seeds;
  if (contiguous) {
    seeds.push_back({sorted.front(), sorted.back(), -1, true});
  } else {
    seeds.push_back({sorted.front(), sorted.front(), -1, false});
    seeds.push_back({sorted.back(), sorted.back(), +1, false});
  }

  while (count < target) {
    bool grew = false;
    for (auto& s : seeds) {
      if (count >= target) break;
      int q = free_towards(s.next_dir < 0 ? s.lo : s.hi, s.next_dir);
      if (q < 0) q = free_towards(s.next_dir < 0 ? s.hi : s.lo, -s.next_dir);
      if (q < 0) continue;
      in[static_cast<std::size_t>(q)] = 1;
      ++count;
      s.lo = std::min(s.lo, q);
      s.hi = std::max(s.hi, q);
      if (s.alternate) s.next_dir = -s.next_dir;
      grew = true;
    }
    if (!grew) break;
  }
  std::vector<int> out;
  for (int q = 0; q < n_qubits; ++q) {
    if (in[static_cast<std::size_t>(q)]) out.push_back(q);
  }
  return out;
}

LinearSystem build_linear_system(const StateVector& state, const LocalTerm& term,
                                 const std::vector<PauliSum>& pool, BMode mode, double dtau,
                                 bool include_inv_sqrt_c) {
  if (pool.empty()) throw DomainError("operator pool is empty");
  if (!(dtau > 0.0)) throw DomainError("dtau must be positive");
  ExpectationTable table(state, 0.0, nullptr);
  Propagation prop;
  if (mode == BMode::kExactDelta0) prop = propagate(state, term, dtau);
  return table_system(table, state, term, pool, mode, dtau, include_inv_sqrt_c, &prop);
}

StepSolution solve_step(const Eigen::MatrixXd& smat, const Eigen::VectorXd& b, double delta,
                        double pinv_tol) {
  if (smat.rows() != smat.cols() || smat.rows() != b.size()) {
    throw DimensionError("S and b sizes disagree");
  }
  check_finite(smat, "S matrix");
  check_finite(b, "b vector");
  Eigen::MatrixXd reg = smat;
  reg.diagonal().array() += delta;
  StepSolution sol;
  sol.a = block_pinv_apply(reg, -b, pinv_tol);
  sol.residual = (reg * sol.a + b).norm();
  return sol;
}

StepResult qite_step(const StateVector& state, const Hamiltonian& h, int term_index,
                     const QiteConfig& config, double dtau) {
  config.validate();
  check_state(state, h);
  if (!(dtau > 0.0)) throw DomainError("dtau must be positive");
  if (term_index < 0 || term_index >= static_cast<int>(h.terms.size())) {
    throw DomainError(fmt::format("term index {} out of range", term_index));
  }
  Planner planner(h, config);
  std::mt19937_64 rng(config.noise_seed);
  return run_step(state, h, term_index, config, dtau, planner.plan(term_index), rng);
}

StepResult qite_step(const StateVector& state, const Hamiltonian& h, int term_index,
                     const QiteConfig& config) {
  return qite_step(state, h, term_index, config, config.dtau);
}

Trajectory qite_evolve(const StateVector& state0, const Hamiltonian& h, const QiteConfig& config,
                       const SweepObserver& observer) {
  config.validate();
  check_state(state0, h);
  const int k = static_cast<int>(h.terms.size());

  Planner planner(h, config);
  std::vector<TermPlan> plans;
  for (int m = 0; m < k; ++m) plans.push_back(planner.plan(m));

  // (term, step length) pairs of one sweep.
  std::vector<std::pair<int, double>> sweep;
  if (config.trotter_order == 1 || k == 1) {
    for (int m = 0; m < k; ++m) sweep.emplace_back(m, config.dtau);
  } else {
    for (int m = 0; m + 1 < k; ++m) sweep.emplace_back(m, config.dtau / 2);
    sweep.emplace_back(k - 1, config.dtau);
    for (int m = k - 2; m >= 0; --m) sweep.emplace_back(m, config.dtau / 2);
  }

  std::mt19937_64 rng(config.noise_seed);
  Trajectory traj;
  traj.betas.push_back(0.0);
  traj.energies.push_back(energy(state0, h));
  traj.inv_sq_norms.push_back(1.0);
  StateVector state = state0;
  if (observer) observer(0, state);
  for (int l = 1; l <= config.n_steps; ++l) {
    double norm_factor = 1.0;
    for (auto [m, dt] : sweep) {
      StepResult r = run_step(state, h, m, config, dt, plans[static_cast<std::size_t>(m)], rng);
      state = std::move(r.state);
      norm_factor *= r.record.c;
      traj.steps.push_back(std::move(r.record));
    }
    traj.betas.push_back(l * config.dtau);
    traj.energies.push_back(energy(state, h));
    traj.inv_sq_norms.push_back(traj.inv_sq_norms.back() * norm_factor);
    if (observer) observer(l, state);
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace qitekit
