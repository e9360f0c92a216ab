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

#include "qitekit/statevector.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "qitekit/errors.hpp"

namespace qitekit {

namespace {

constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_same_width(int a, int b) {
  if (a != b) throw DimensionError(fmt::format("qubit count mismatch: {} vs {}", a, b));
}

void check_qubit_list(int n_qubits, std::span<const int> qubits) {
  std::vector<int> sorted(qubits.begin(), qubits.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("qubit list contains duplicates");
  }
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw DimensionError(fmt::format("qubit {} out of range for {} qubits", q, n_qubits));
    }
  }
}

// offsets[j] = global index bits of local index j.
std::vector<std::uint64_t> local_offsets(std::span<const int> qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      if ((j >> b) & 1U) offsets[j] |= std::uint64_t{1} << qubits[b];
    }
  }
  return offsets;
}

std::uint64_t qubit_mask(std::span<const int> qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= std::uint64_t{1} << q;
  return m;
}

// Compresses global masks onto local bit positions; throws if the mask has
// bits outside `qubits`.
std::uint64_t to_local(std::uint64_t mask, std::span<const int> qubits) {
  std::uint64_t out = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) {
    if ((mask >> qubits[b]) & 1U) {
      out |= std::uint64_t{1} << b;
      mask &= ~(std::uint64_t{1} << qubits[b]);
    }
  }
  if (mask != 0) throw DimensionError("operator acts outside the requested qubits");
  return out;
}

Eigen::MatrixXcd hermitian_function(const Eigen::MatrixXcd& h, auto&& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXcd diag(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < diag.size(); ++k) diag[k] = f(es.eigenvalues()[k]);
  return es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

StateVector::StateVector(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw DomainError("a state needs at least one qubit");
  if (n_qubits > max_qubits) {
    throw ResourceError(
        fmt::format("{} qubits exceeds the configured maximum of {}", n_qubits, max_qubits));
  }
  amps_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw DimensionError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector StateVector::product(std::string_view label) {
  const int n = static_cast<int>(label.size());
  StateVector s(n);
  const double r = 1.0 / std::sqrt(2.0);
  s.amps_.setZero();
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    cplx amp = 1.0;
    for (int q = 0; q < n && amp != 0.0; ++q) {
      const bool one = (i >> q) & 1U;
      switch (label[q]) {
        case '0':
          amp *= one ? 0.0 : 1.0;
          break;
        case '1':
          amp *= one ? 1.0 : 0.0;
          break;
        case '+':
          amp *= r;
          break;
        case '-':
          amp *= one ? -r : r;
          break;
        default:
          throw ParseError(fmt::format("bad product-state label '{}'", label));
      }
    }
    s.amps_[static_cast<Eigen::Index>(i)] = amp;
  }
  return s;
}

StateVector StateVector::from_amplitudes(Eigen::VectorXcd amplitudes, bool normalize) {
  const auto size = static_cast<std::uint64_t>(amplitudes.size());
  if (size < 2 || !std::has_single_bit(size)) {
    throw DimensionError("amplitude count must be a power of two >= 2");
  }
  StateVector s;
  s.n_qubits_ = std::countr_zero(size);
  s.amps_ = std::move(amplitudes);
  if (normalize) s.normalize();
  return s;
}

double StateVector::normalize() {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero state");
  amps_ /= n;
  return n;
}

void apply_pauli(const PauliString& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const auto dim = static_cast<std::uint64_t>(in.size());
  if (dim != (std::uint64_t{1} << p.n_qubits())) throw DimensionError("Pauli width mismatch");
  out.resize(in.size());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const cplx base = kIPowers[p.y_count() & 3];
  for (std::uint64_t i = 0; i < dim; ++i) {
    const cplx v = (std::popcount(i & z) & 1) ? -base : base;
    out[static_cast<Eigen::Index>(i ^ x)] = v * in[static_cast<Eigen::Index>(i)];
  }
}

void apply_pauli_sum(const PauliSum& a, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  out = Eigen::VectorXcd::Zero(in.size());
  Eigen::VectorXcd tmp;
  for (const auto& t : a.terms()) {
    apply_pauli(t.string, in, tmp);
    out += t.coeff * tmp;
  }
}

cplx matrix_element(const StateVector& bra, const PauliString& p, const StateVector& ket) {
  check_same_width(bra.n_qubits(), ket.n_qubits());
  check_same_width(bra.n_qubits(), p.n_qubits());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const auto& b = bra.amplitudes();
  const auto& k = ket.amplitudes();
  cplx acc = 0.0;
  for (std::uint64_t i = 0; i < bra.dim(); ++i) {
    const cplx term =
        std::conj(b[static_cast<Eigen::Index>(i ^ x)]) * k[static_cast<Eigen::Index>(i)];
    acc += (std::popcount(i & z) & 1) ? -term : term;
  }
  return acc * kIPowers[p.y_count() & 3];
}

double expectation(const StateVector& state, const PauliString& p) {
  check_same_width(state.n_qubits(), p.n_qubits());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const auto& a = state.amplitudes();
  double acc = 0.0;
  if (x == 0) {
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
      const double w = std::norm(a[static_cast<Eigen::Index>(i)]);
      acc += (std::popcount(i & z) & 1) ? -w : w;
    }
    return acc;
  }
  // Pair i with i ^ x. With w = conj(a[j]) a[i] the pair contributes
  // s_i w + s_j conj(w), so a real state gives an exact zero for odd #Y.
  const std::uint64_t low = x & (~x + 1);
  const int y = p.y_count() & 3;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (i & low) continue;
    const std::uint64_t j = i ^ x;
    const cplx w = std::conj(a[static_cast<Eigen::Index>(j)]) * a[static_cast<Eigen::Index>(i)];
    const bool si = std::popcount(i & z) & 1;
    const bool sj = std::popcount(j & z) & 1;
    if ((y & 1) == 0) {
      if (si == sj) acc += si ? -2.0 * w.real() : 2.0 * w.real();
    } else if (si != sj) {
      acc += si ? 2.0 * w.imag() : -2.0 * w.imag();
    }
  }
  return (y & 2) ? -acc : acc;
}

double expectation(const StateVector& state, const PauliSum& a) {
  check_same_width(state.n_qubits(), a.n_qubits());
  double e = 0.0;
  for (const auto& t : a.terms()) e += t.coeff * expectation(state, t.string);
  return e;
}

Eigen::MatrixXcd local_matrix(const PauliSum& a, std::span<const int> qubits) {
  const std::uint64_t dim = std::uint64_t{1} << qubits.size();
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : a.terms()) {
    const std::uint64_t x = to_local(t.string.x_mask(), qubits);
    const std::uint64_t z = to_local(t.string.z_mask(), qubits);
    const cplx base = t.coeff * kIPowers[t.string.y_count() & 3];
    for (std::uint64_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(j ^ x), static_cast<Eigen::Index>(j)) +=
          (std::popcount(j & z) & 1) ? -base : base;
    }
  }
  return m;
}

void apply_local_matrix(StateVector& state, std::span<const int> qubits,
                        const Eigen::MatrixXcd& matrix) {
  check_qubit_list(state.n_qubits(), qubits);
  const auto offsets = local_offsets(qubits);
  const auto k = static_cast<Eigen::Index>(offsets.size());
  if (matrix.rows() != k || matrix.cols() != k) {
    throw DimensionError("local matrix does not match the number of qubits");
  }
  const std::uint64_t mask = qubit_mask(qubits);
  auto& amps = state.amplitudes();
  Eigen::VectorXcd in(k);
  Eigen::VectorXcd out(k);
  for (std::uint64_t base = 0; base < state.dim(); ++base) {
    if ((base & mask) != 0) continue;
    for (Eigen::Index j = 0; j < k; ++j) in[j] = amps[static_cast<Eigen::Index>(base | offsets[j])];
    out.noalias() = matrix * in;
    for (Eigen::Index j = 0; j < k; ++j)
      amps[static_cast<Eigen::Index>(base | offsets[j])] = out[j];
  }
}

TermExpResult apply_term_exp(const StateVector& state, std::span<const int> support,
                             const Eigen::MatrixXcd& h_local, double dtau) {
  if (!(dtau > 0.0)) throw DomainError("dtau must be positive");
  if ((h_local - h_local.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("local term is not Hermitian");
  }
  Eigen::MatrixXcd prop =
      hermitian_function(h_local, [dtau](double e) { return cplx(std::exp(-dtau * e), 0.0); });
  // A real term has a real propagator; keep real states exactly real.
  if (h_local.imag().isZero(0.0)) prop = prop.real().cast<cplx>();
  TermExpResult r{state, 1.0};
  apply_local_matrix(r.state, support, prop);
  const double n = r.state.norm();
  r.c = n * n;
  if (!(r.c > 0.0) || !std::isfinite(r.c)) throw NumericalError("term propagation lost the state");
  r.state.amplitudes() /= n;
  return r;
}

TermExpResult apply_term_exp(const StateVector& state, const PauliSum& h, double dtau) {
  check_same_width(state.n_qubits(), h.n_qubits());
  std::vector<int> support = h.support();
  if (support.empty()) {
    // Pure constant: e^{-dtau c} only rescales.
    double c0 = 0.0;
    for (const auto& t : h.terms()) c0 += t.coeff;
    return {state, std::exp(-2.0 * dtau * c0)};
  }
  return apply_term_exp(state, support, local_matrix(h, support), dtau);
}

StateVector apply_domain_unitary(const StateVector& state, const PauliSum& a,
                                 std::span<const int> domain, double dtau, int max_domain_qubits) {
  check_same_width(state.n_qubits(), a.n_qubits());
  if (static_cast<int>(domain.size()) > max_domain_qubits) {
    throw ResourceError(fmt::format("domain of {} qubits exceeds the maximum of {}", domain.size(),
                                    max_domain_qubits));
  }
  StateVector out = state;
  if (a.empty() || dtau == 0.0) return out;
  const Eigen::MatrixXcd gen = local_matrix(a, domain);
  Eigen::MatrixXcd u =
      hermitian_function(gen, [dtau](double e) { return std::polar(1.0, -dtau * e); });
  // A purely imaginary generator gives a real orthogonal map.
  if (gen.real().isZero(0.0)) u = u.real().cast<cplx>();
  apply_local_matrix(out, domain, u);
  return out;
}

DensityMatrix reduced_density_matrix(const StateVector& state, std::span<const int> qubits,
                                     int max_qubits) {
  check_qubit_list(state.n_qubits(), qubits);
  if (static_cast<int>(qubits.size()) > max_qubits) {
    throw ResourceError(fmt::format("reduced density matrix on {} qubits exceeds the maximum of {}",
                                    qubits.size(), max_qubits));
  }
  const auto offsets = local_offsets(qubits);
  const auto k = static_cast<Eigen::Index>(offsets.size());
  const std::uint64_t mask = qubit_mask(qubits);
  const auto& amps = state.amplitudes();
  DensityMatrix rho{Eigen::MatrixXcd::Zero(k, k), {qubits.begin(), qubits.end()}};
  Eigen::VectorXcd v(k);
  for (std::uint64_t base = 0; base < state.dim(); ++base) {
    if ((base & mask) != 0) continue;
    for (Eigen::Index j = 0; j < k; ++j) v[j] = amps[static_cast<Eigen::Index>(base | offsets[j])];
    rho.entries.noalias() += v * v.adjoint();
  }
  return rho;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Measurement measure_collapse(const StateVector& state, std::span<const Basis> bases,
                             std::mt19937_64& rng) {
  const int n = state.n_qubits();
  if (static_cast<int>(bases.size()) != n) {
    throw DimensionError("need one measurement basis per qubit");
  }
  StateVector rotated = state;
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd hadamard(2, 2);
  hadamard << r, r, r, -r;
  for (int q = 0; q < n; ++q) {
    if (bases[q] == Basis::X) {
      const int qs[1] = {q};
      apply_local_matrix(rotated, qs, hadamard);
    }
  }
  const auto& amps = rotated.amplitudes();
  const double total = amps.squaredNorm();
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::uint64_t chosen = rotated.dim() - 1;
  for (std::uint64_t i = 0; i < rotated.dim(); ++i) {
    const double p = std::norm(amps[static_cast<Eigen::Index>(i)]);
    acc += p;
    if (target < acc && p > 0.0) {
      chosen = i;
      break;
    }
  }
  // Guard against rounding at the top end landing on a zero-probability state.
  while (std::norm(amps[static_cast<Eigen::Index>(chosen)]) == 0.0 && chosen > 0) --chosen;

  std::string label(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    const bool one = (chosen >> q) & 1U;
    if (bases[q] == Basis::Z) {
      label[q] = one ? '1' : '0';
    } else {
      label[q] = one ? '-' : '+';
    }
  }
  return {label, StateVector::product(label)};
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  check_same_width(a.n_qubits(), b.n_qubits());
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the first argument
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace qitekit
