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

#include "qitekit/hamiltonians.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qitekit/errors.hpp"

namespace qitekit {

namespace {

PauliString letters(int n, std::initializer_list<std::pair<int, Pauli>> l) { return {n, l}; }

void require_sites(int n, int minimum, const char* model) {
  if (n < minimum)
    throw DomainError(fmt::format("{} needs at least {} sites, got {}", model, minimum, n));
}

LocalTerm make_term(PauliSum op, std::vector<int> support) {
  std::sort(support.begin(), support.end());
  return {std::move(support), std::move(op)};
}

PauliSum spin_dot(int n, int i, int j, double scale) {
  PauliSum s(n);
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) s.add(scale / 4.0, letters(n, {{i, p}, {j, p}}));
  return s;
}

}  // namespace

int Hamiltonian::max_support() const {
  std::size_t k = 0;
  for (const auto& t : terms) k = std::max(k, t.support.size());
  return static_cast<int>(k);
}

bool Hamiltonian::is_real() const {
  for (const auto& t : terms) {
    for (const auto& p : t.op.terms()) {
      if (p.string.y_count() % 2 != 0) return false;
    }
  }
  return true;
}

PauliSum Hamiltonian::total() const {
  PauliSum s(n_qubits);
  for (const auto& t : terms) s.add(t.op);
  return s;
}

double energy(const StateVector& state, const Hamiltonian& h) {
  double e = h.offset;
  for (const auto& t : h.terms) e += expectation(state, t.op);
  return e;
}

Eigen::MatrixXcd dense_matrix(const Hamiltonian& h, int max_qubits) {
  if (h.n_qubits > max_qubits) {
    throw ResourceError(
        fmt::format("dense matrix on {} qubits exceeds the limit of {}", h.n_qubits, max_qubits));
  }
  const auto dim = Eigen::Index{1} << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m.diagonal().setConstant(h.offset);
  static constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : h.terms) {
    for (const auto& p : t.op.terms()) {
      const std::uint64_t x = p.string.x_mask();
      const std::uint64_t z = p.string.z_mask();
      const cplx base = p.coeff * kIPowers[p.string.y_count() & 3];
      for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) {
        m(static_cast<Eigen::Index>(i ^ x), static_cast<Eigen::Index>(i)) +=
            (std::popcount(i & z) & 1) ? -base : base;
      }
    }
  }
  return m;
}

Hamiltonian one_qubit_field(double alpha, double beta) {
  Hamiltonian h{
      .n_qubits = 1, .model = "one_qubit_field", .params = {{"alpha", alpha}, {"beta", beta}}};
  PauliSum op(1);
  op.add(alpha, letters(1, {{0, Pauli::X}}));
  op.add(beta, letters(1, {{0, Pauli::Z}}));
  h.terms.push_back(make_term(std::move(op), {0}));
  if (alpha == 0.0 && beta == 0.0) h.warnings.emplace_back("degenerate model: alpha = beta = 0");
  return h;
}

Hamiltonian heisenberg_1d(int n, double j, double b) {
  require_sites(n, 2, "heisenberg_1d");
  Hamiltonian h{
      .n_qubits = n, .model = "heisenberg_1d", .params = {{"n", double(n)}, {"J", j}, {"B", b}}};
  for (int i = 0; i + 1 < n; ++i)
    h.terms.push_back(make_term(spin_dot(n, i, i + 1, j), {i, i + 1}));
  if (b != 0.0) {
    for (int i = 0; i < n; ++i)
      h.terms.push_back(make_term(PauliSum::single(letters(n, {{i, Pauli::Z}}), b), {i}));
  }
  return h;
}

Hamiltonian heisenberg_long_range(int n) {
  require_sites(n, 2, "heisenberg_long_range");
  Hamiltonian h{.n_qubits = n, .model = "heisenberg_long_range", .params = {{"n", double(n)}}};
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      h.terms.push_back(make_term(spin_dot(n, i, k, 1.0 / (k - i + 1)), {i, k}));
    }
  }
  return h;
}

Hamiltonian tfi_1d(int n, double j, double field) {
  require_sites(n, 2, "tfi_1d");
  Hamiltonian h{
      .n_qubits = n, .model = "tfi_1d", .params = {{"n", double(n)}, {"J", j}, {"h", field}}};
  for (int i = 0; i + 1 < n; ++i) {
    h.terms.push_back(
        make_term(PauliSum::single(letters(n, {{i, Pauli::Z}, {i + 1, Pauli::Z}}), j), {i, i + 1}));
  }
  if (field != 0.0) {
    for (int i = 0; i < n; ++i) {
      h.terms.push_back(make_term(PauliSum::single(letters(n, {{i, Pauli::X}}), field), {i}));
    }
  }
  return h;
}

Hamiltonian hubbard_1d_jw(int n_sites, double u, double mu) {
  require_sites(n_sites, 2, "hubbard_1d_jw");
  const int n = 2 * n_sites;
  Hamiltonian h{.n_qubits = n,
                .model = "hubbard_1d_jw",
                .params = {{"n_sites", double(n_sites)}, {"U", u}, {"mu", mu}}};
  // -(f_p^dag f_{p+2} + h.c.) = -(X Z X + Y Z Y) / 2 on {p, p+1, p+2}.
  for (int p = 0; p + 2 < n; ++p) {
    PauliSum op(n);
    op.add(-0.5, letters(n, {{p, Pauli::X}, {p + 1, Pauli::Z}, {p + 2, Pauli::X}}));
    op.add(-0.5, letters(n, {{p, Pauli::Y}, {p + 1, Pauli::Z}, {p + 2, Pauli::Y}}));
    h.terms.push_back(make_term(std::move(op), {p, p + 1, p + 2}));
  }
  for (int i = 0; i < n_sites; ++i) {
    const int up = 2 * i;
    const int down = 2 * i + 1;
    PauliSum op(n);
    op.add(u / 4.0, PauliString(n));
    op.add(-u / 4.0, letters(n, {{up, Pauli::Z}}));
    op.add(-u / 4.0, letters(n, {{down, Pauli::Z}}));
    op.add(u / 4.0, letters(n, {{up, Pauli::Z}, {down, Pauli::Z}}));
    h.terms.push_back(make_term(std::move(op), {up, down}));
  }
  if (mu != 0.0) {
    for (int p = 0; p < n; ++p) {
      PauliSum op(n);
      op.add(mu / 2.0, PauliString(n));
      op.add(-mu / 2.0, letters(n, {{p, Pauli::Z}}));
      h.terms.push_back(make_term(std::move(op), {p}));
    }
  }
  return h;
}

Hamiltonian h2_bk(const std::array<double, 6>& g) {
  for (double v : g) {
    if (!std::isfinite(v)) throw DomainError("H2 coefficients must be finite");
  }
  Hamiltonian h{.n_qubits = 2, .offset = g[0], .model = "h2_bk"};
  for (int k = 0; k < 6; ++k) h.params[fmt::format("g{}", k)] = g[k];
  PauliSum op(2);
  op.add(g[1], letters(2, {{0, Pauli::Z}}));
  op.add(g[2], letters(2, {{1, Pauli::Z}}));
  op.add(g[3], letters(2, {{0, Pauli::Z}, {1, Pauli::Z}}));
  op.add(g[4], letters(2, {{0, Pauli::X}, {1, Pauli::X}}));
  op.add(g[5], letters(2, {{0, Pauli::Y}, {1, Pauli::Y}}));
  op.prune();
  if (op.empty()) h.warnings.emplace_back("flat spectrum: only g0 is nonzero");
  h.terms.push_back(make_term(std::move(op), {0, 1}));
  return h;
}

std::vector<H2Geometry> load_h2_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open H2 coefficient file '{}'", path.string()));
  std::vector<H2Geometry> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("{}:{}: not a number: '{}'", path.string(), line_no, token));
      }
    }
    if (values.empty()) continue;
    if (values.size() != 7) {
      throw ParseError(fmt::format("{}:{}: expected 7 fields (R g0..g5), got {}", path.string(),
                                   line_no, values.size()));
    }
    H2Geometry row{values[0], {}};
    std::copy(values.begin() + 1, values.end(), row.g.begin());
    rows.push_back(row);
  }
  return rows;
}

H2Geometry find_h2_geometry(const std::vector<H2Geometry>& table, double r) {
  for (const auto& row : table) {
    if (std::abs(row.bond_length - r) <= 1e-9) return row;
  }
  throw DomainError(fmt::format("no H2 coefficients for bond length {}", r));
}

Hamiltonian maxcut(const std::vector<Edge>& edges, int n_vertices) {
  if (n_vertices < 1) throw DomainError("maxcut needs at least one vertex");
  if (edges.empty()) throw DomainError("maxcut needs at least one edge");
  Hamiltonian h{.n_qubits = n_vertices,
                .model = "maxcut",
                .params = {{"n", double(n_vertices)}},
                .edges = edges};
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_vertices || j >= n_vertices) {
      throw DimensionError(fmt::format("edge ({}, {}) outside {} vertices", i, j, n_vertices));
    }
    if (i == j) throw DomainError(fmt::format("self-loop on vertex {}", i));
    PauliSum op(n_vertices);
    op.add(-0.5, PauliString(n_vertices));
    op.add(0.5, letters(n_vertices, {{i, Pauli::Z}, {j, Pauli::Z}}));
    h.terms.push_back(make_term(std::move(op), {i, j}));
  }
  return h;
}

int cut_value(const std::vector<Edge>& edges, std::uint64_t z) {
  int cut = 0;
  for (auto [i, j] : edges) cut += ((z >> i) & 1U) != ((z >> j) & 1U);
  return cut;
}

}  // namespace qitekit
