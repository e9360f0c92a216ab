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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracle/dense_oracle.hpp"
#include "qitekit/errors.hpp"

using namespace qitekit;

namespace {

Eigen::VectorXd spectrum(const Hamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h));
  return es.eigenvalues();
}

void expect_hermitian(const Hamiltonian& h) {
  Eigen::MatrixXcd m = dense_matrix(h);
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12) << h.model;
}

void expect_terms_within_support(const Hamiltonian& h) {
  for (const auto& t : h.terms) {
    for (int q : t.op.support()) {
      EXPECT_TRUE(std::find(t.support.begin(), t.support.end(), q) != t.support.end()) << h.model;
    }
  }
}

// Ground energy restricted to basis states with `particles` set bits.
double sector_ground(const Eigen::MatrixXcd& m, int particles) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::popcount(static_cast<unsigned>(i)) == particles) idx.push_back(i);
  }
  Eigen::MatrixXcd sub(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = m(idx[a], idx[b]);
  }
  return oracle::ground_energy(sub);
}

const std::vector<Edge> kGraph = {{0, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5}, {4, 5}};

}  // namespace

TEST(OneQubitField, Examples) {
  const double r = 1 / std::sqrt(2.0);
  auto ev = spectrum(one_qubit_field(r, r));
  EXPECT_NEAR(ev[0], -1.0, 1e-12);
  EXPECT_NEAR(ev[1], 1.0, 1e-12);
  EXPECT_NEAR(spectrum(one_qubit_field(0, 1))[0], -1.0, 1e-12);
  oracle::Vec g = oracle::ground_state(dense_matrix(one_qubit_field(1, 0)));
  EXPECT_NEAR(std::norm(g.dot(StateVector::product("-").amplitudes())), 1.0, 1e-12);
  EXPECT_FALSE(one_qubit_field(0, 0).warnings.empty());
  EXPECT_TRUE(one_qubit_field(1, 0).warnings.empty());
}

TEST(Heisenberg1d, Examples) {
  EXPECT_NEAR(spectrum(heisenberg_1d(2, 1, 0))[0], -0.75, 1e-12);
  EXPECT_NEAR(spectrum(heisenberg_1d(2, 0, 1))[0], -2.0, 1e-12);
  EXPECT_NEAR(spectrum(heisenberg_1d(4, 1, 0))[0],
              oracle::ground_energy(oracle::heisenberg(4, 1, 0)), 1e-12);
  EXPECT_NEAR(spectrum(heisenberg_1d(4, 1, 0))[0], -1.6160254037844386, 1e-12);
  EXPECT_EQ(heisenberg_1d(5, 1, 0).size(), 4u);
  EXPECT_EQ(heisenberg_1d(5, 1, 0.3).size(), 9u);
  EXPECT_THROW(heisenberg_1d(1, 1, 0), DomainError);
}

TEST(Heisenberg1d, MatchesTextbookConstructionAndConservesSz) {
  for (int n = 2; n <= 6; ++n) {
    Hamiltonian h = heisenberg_1d(n, 0.7, -0.4);
    Eigen::MatrixXcd m = dense_matrix(h);
    EXPECT_LT((m - oracle::heisenberg(n, 0.7, -0.4)).norm(), 1e-12);
    oracle::Mat sz = oracle::Mat::Zero(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) sz += oracle::site(n, i, 'Z');
    EXPECT_LT((m * sz - sz * m).norm(), 1e-12);
    expect_hermitian(h);
    expect_terms_within_support(h);
    EXPECT_TRUE(h.is_real());
  }
}

TEST(HeisenbergLongRange, Examples) {
  EXPECT_NEAR(spectrum(heisenberg_long_range(2))[0], -0.375, 1e-12);
  Hamiltonian h3 = heisenberg_long_range(3);
  ASSERT_EQ(h3.size(), 3u);
  EXPECT_DOUBLE_EQ(h3.terms[0].op.terms()[0].coeff, 0.5 / 4);
  EXPECT_DOUBLE_EQ(h3.terms[1].op.terms()[0].coeff, (1.0 / 3) / 4);
  EXPECT_DOUBLE_EQ(h3.terms[2].op.terms()[0].coeff, 0.5 / 4);
  EXPECT_EQ(heisenberg_long_range(6).size(), 15u);
  for (int n = 2; n <= 6; ++n) {
    EXPECT_LT((dense_matrix(heisenberg_long_range(n)) - oracle::heisenberg_long_range(n)).norm(),
              1e-12);
  }
}

TEST(Tfi1d, Examples) {
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(spectrum(tfi_1d(2, r, r))[0], oracle::ground_energy(oracle::tfi(2, r, r)), 1e-12);
  // Two-site closed form: -sqrt(J^2 + 4 h^2) in the even sector.
  EXPECT_NEAR(spectrum(tfi_1d(2, r, r))[0], -std::sqrt(0.5 + 4 * 0.5), 1e-12);
  auto ev = spectrum(tfi_1d(2, 1, 0));
  EXPECT_NEAR(ev[0], -1.0, 1e-12);
  EXPECT_NEAR(ev[1], -1.0, 1e-12);
  EXPECT_NEAR(spectrum(tfi_1d(2, 0, 1))[0], -2.0, 1e-12);
  for (int n = 2; n <= 6; ++n) {
    EXPECT_LT((dense_matrix(tfi_1d(n, -1, -1.25)) - oracle::tfi(n, -1, -1.25)).norm(), 1e-12);
  }
}

TEST(Hubbard1dJw, MatchesSecondQuantizedOracle) {
  for (int sites = 2; sites <= 3; ++sites) {
    for (double mu : {0.0, 0.3}) {
      Hamiltonian h = hubbard_1d_jw(sites, 2.5, mu);
      EXPECT_LT((dense_matrix(h) - oracle::hubbard(sites, 2.5, mu)).norm(), 1e-12);
      expect_hermitian(h);
      expect_terms_within_support(h);
    }
  }
}

TEST(Hubbard1dJw, Examples) {
  EXPECT_NEAR(sector_ground(dense_matrix(hubbard_1d_jw(2, 0, 0)), 2), -2.0, 1e-12);
  const double strong = sector_ground(dense_matrix(hubbard_1d_jw(2, 100, 0)), 2);
  EXPECT_LT(strong, 0.0);
  EXPECT_GT(strong, -0.1);
  Hamiltonian h = hubbard_1d_jw(3, 1.0, 0.0);
  EXPECT_EQ(h.size(), 4u + 3u);
  for (const auto& t : h.terms) EXPECT_NE(t.support.size(), 1u);
  EXPECT_EQ(h.terms[0].support, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(hubbard_1d_jw(3, 1.0, 0.5).size(), 4u + 3u + 6u);
  EXPECT_THROW(hubbard_1d_jw(1, 1, 0), DomainError);
}

TEST(H2Bk, Structure) {
  auto flat = h2_bk({-0.4, 0, 0, 0, 0, 0});
  auto ev = spectrum(flat);
  EXPECT_NEAR(ev.minCoeff(), -0.4, 1e-14);
  EXPECT_NEAR(ev.maxCoeff(), -0.4, 1e-14);
  EXPECT_FALSE(flat.warnings.empty());

  // Synthetic diagonal instance: enumerate the four basis energies.
  std::array<double, 6> g = {0.1, 0.3, -0.2, 0.15, 0, 0};
  double want = 1e9;
  for (int z = 0; z < 4; ++z) {
    const double s0 = (z & 1) ? -1 : 1;
    const double s1 = (z & 2) ? -1 : 1;
    want = std::min(want, g[0] + g[1] * s0 + g[2] * s1 + g[3] * s0 * s1);
  }
  EXPECT_NEAR(spectrum(h2_bk(g))[0], want, 1e-12);

  // Symmetric instance commutes with the qubit swap.
  Eigen::MatrixXcd m = dense_matrix(h2_bk({0.2, 0.4, 0.4, 0.1, 0.05, 0.05}));
  oracle::Mat swap = oracle::Mat::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  EXPECT_LT((swap * m * swap - m).norm(), 1e-14);
  EXPECT_EQ(h2_bk(g).size(), 1u);
  EXPECT_DOUBLE_EQ(h2_bk(g).offset, 0.1);
}

TEST(H2Bk, LoadsTable) {
  auto path = std::filesystem::temp_directory_path() / "qitekit_h2_table_test.dat";
  {
    std::ofstream out(path);
    out << "# R g0 g1 g2 g3 g4 g5\n0.5 1 2 3 4 5 6  # first\n\n0.75 -1 -2 -3 -4 -5 -6\n";
  }
  auto rows = load_h2_table(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(find_h2_geometry(rows, 0.75).g[5], -6);
  EXPECT_THROW(find_h2_geometry(rows, 1.0), DomainError);
  {
    std::ofstream out(path);
    out << "0.5 1 2 3 4 5\n";
  }
  EXPECT_THROW(load_h2_table(path), ParseError);
  std::filesystem::remove(path);
}

TEST(Maxcut, Examples) {
  Hamiltonian h = maxcut(kGraph, 6);
  EXPECT_NEAR(spectrum(h)[0], -5.0, 1e-12);
  auto single = spectrum(maxcut({{0, 1}}, 2));
  EXPECT_NEAR(single.minCoeff(), -1.0, 1e-14);
  EXPECT_NEAR(single.maxCoeff(), 0.0, 1e-14);
  // S = {0, 2, 4} as set bits.
  const std::uint64_t z = 0b010101;
  StateVector s = StateVector::basis(6, z);
  EXPECT_NEAR(energy(s, h), -5.0, 1e-14);
  EXPECT_EQ(cut_value(kGraph, z), 5);
  EXPECT_THROW(maxcut({{1, 1}}, 2), DomainError);
  EXPECT_THROW(maxcut({{0, 2}}, 2), DimensionError);
}

TEST(Maxcut, DiagonalCountsCutEdgesExhaustively) {
  Hamiltonian h = maxcut(kGraph, 6);
  Eigen::MatrixXcd m = dense_matrix(h);
  EXPECT_LT((m - oracle::maxcut(6, kGraph)).norm(), 1e-12);
  EXPECT_LT((m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).norm(), 1e-14);
  for (std::uint64_t z = 0; z < 64; ++z) {
    int cut = 0;
    for (auto [i, j] : kGraph) cut += ((z >> i) & 1) != ((z >> j) & 1);
    EXPECT_NEAR(m(z, z).real(), -cut, 1e-14);
    EXPECT_EQ(cut_value(kGraph, z), cut);
  }
}

TEST(Hamiltonian, EnergyIncludesOffset) {
  Hamiltonian h = h2_bk({0.5, 1, 0, 0, 0, 0});
  EXPECT_NEAR(energy(StateVector(2), h), 1.5, 1e-15);
  EXPECT_EQ(h.max_support(), 2);
  EXPECT_THROW(dense_matrix(heisenberg_1d(4, 1, 0), 3), ResourceError);
}
