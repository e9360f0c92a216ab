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

#include "qitekit/pauli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "qitekit/errors.hpp"

namespace qitekit {

namespace {

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

void check_qubit(int n_qubits, int qubit) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw DimensionError(fmt::format("qubit {} out of range for {} qubits", qubit, n_qubits));
  }
}

void check_n(int n_qubits) {
  if (n_qubits < 0 || n_qubits > PauliString::kMaxQubits) {
    throw ResourceError(fmt::format("PauliString supports at most {} qubits, got {}",
                                    PauliString::kMaxQubits, n_qubits));
  }
}

// Single-qubit products a*b = i^phase * result.
struct LetterProduct {
  int phase;
  Pauli result;
};

constexpr LetterProduct kTable[4][4] = {
    // I           X                  Y                  Z
    {{0, Pauli::I}, {0, Pauli::X}, {0, Pauli::Y}, {0, Pauli::Z}},  // I
    {{0, Pauli::X}, {0, Pauli::I}, {1, Pauli::Z}, {3, Pauli::Y}},  // X
    {{0, Pauli::Y}, {3, Pauli::Z}, {0, Pauli::I}, {1, Pauli::X}},  // Y
    {{0, Pauli::Z}, {1, Pauli::Y}, {3, Pauli::X}, {0, Pauli::I}},  // Z
};

// Complex-weighted sums; only used to build fermionic pool operators.
using ComplexSum = std::unordered_map<PauliString, cplx, PauliStringHash>;

ComplexSum product(const ComplexSum& a, const ComplexSum& b) {
  ComplexSum out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      PhasedPauli p = multiply(sa, sb);
      out[p.string] += ca * cb * p.phase();
    }
  }
  return out;
}

ComplexSum adjoint(const ComplexSum& a) {
  ComplexSum out;
  for (const auto& [s, c] : a) out[s] = std::conj(c);
  return out;
}

// Jordan-Wigner image of a single-mode factor. Occupied = |1>, so
// f^dag = Z...Z (X - iY)/2 and n = (1 - Z)/2.
ComplexSum jw_factor(int n_qubits, int mode, int digit) {
  PauliString zs(n_qubits);
  for (int k = 0; k < mode; ++k) zs.set(k, Pauli::Z);
  auto with = [&](Pauli p) {
    PauliString s = zs;
    s.set(mode, p);
    return s;
  };
  ComplexSum out;
  switch (digit) {
    case 0:
      out[PauliString(n_qubits)] = 1.0;
      break;
    case 1:  // annihilation
      out[with(Pauli::X)] = 0.5;
      out[with(Pauli::Y)] = cplx(0.0, 0.5);
      break;
    case 2:  // creation
      out[with(Pauli::X)] = 0.5;
      out[with(Pauli::Y)] = cplx(0.0, -0.5);
      break;
    default: {  // number operator
      PauliString z(n_qubits);
      z.set(mode, Pauli::Z);
      out[PauliString(n_qubits)] = 0.5;
      out[z] = -0.5;
      break;
    }
  }
  return out;
}

PauliSum hermitian_part(int n_qubits, const ComplexSum& a, cplx scale) {
  std::vector<PauliTerm> terms;
  for (const auto& [s, c] : a) {
    const cplx v = scale * c;
    if (std::abs(v.imag()) > 1e-12) {
      throw NumericalError("fermionic pool operator is not Hermitian");
    }
    if (std::abs(v.real()) > 1e-14) terms.push_back({v.real(), s});
  }
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& x, const PauliTerm& y) { return x.string < y.string; });
  return PauliSum(n_qubits, std::move(terms));
}

std::vector<PauliSum> fermionic_pool(const OperatorPool& pool) {
  const int d = static_cast<int>(pool.domain.size());
  if (d > 10) throw ResourceError("fermionic pool limited to 10 modes");
  std::vector<int> modes = pool.domain;

  std::vector<PauliSum> out;
  std::vector<int> digits(d);
  const std::uint64_t total = std::uint64_t{1} << (2 * d);
  for (std::uint64_t code = 0; code < total; ++code) {
    int n_annihilate = 0;
    int n_create = 0;
    std::uint64_t adjoint_code = 0;
    for (int k = 0; k < d; ++k) {
      digits[k] = static_cast<int>((code >> (2 * (d - 1 - k))) & 3U);
      n_annihilate += digits[k] == 1;
      n_create += digits[k] == 2;
      const int adj = digits[k] == 1 ? 2 : digits[k] == 2 ? 1 : digits[k];
      adjoint_code |= static_cast<std::uint64_t>(adj) << (2 * (d - 1 - k));
    }
    if (n_annihilate != n_create) continue;
    if (adjoint_code < code) continue;  // emitted with its partner

    ComplexSum m;
    m[PauliString(pool.n_qubits)] = 1.0;
    for (int k = 0; k < d; ++k) {
      if (digits[k] != 0) m = product(m, jw_factor(pool.n_qubits, modes[k], digits[k]));
    }
    if (adjoint_code == code) {
      out.push_back(hermitian_part(pool.n_qubits, m, 1.0));
      continue;
    }
    ComplexSum sum = m;
    ComplexSum diff = m;
    for (const auto& [s, c] : adjoint(m)) {
      sum[s] += c;
      diff[s] -= c;
    }
    out.push_back(hermitian_part(pool.n_qubits, sum, 1.0));
    out.push_back(hermitian_part(pool.n_qubits, diff, cplx(0.0, 1.0)));
  }
  return out;
}

}  // namespace

char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I':
    case '_':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw ParseError(fmt::format("not a Pauli letter: '{}'", c));
  }
}

PauliString::PauliString(int n_qubits) : n_qubits_(n_qubits) { check_n(n_qubits); }

PauliString::PauliString(int n_qubits, std::initializer_list<std::pair<int, Pauli>> letters)
    : PauliString(n_qubits) {
  for (const auto& [q, p] : letters) set(q, p);
}

PauliString PauliString::from_masks(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask) {
  PauliString s(n_qubits);
  const std::uint64_t valid = n_qubits == 64 ? ~std::uint64_t{0} : bit(n_qubits) - 1;
  if (((x_mask | z_mask) & ~valid) != 0) throw DimensionError("mask exceeds qubit count");
  s.x_ = x_mask;
  s.z_ = z_mask;
  return s;
}

PauliString PauliString::from_dense(std::string_view letters) {
  PauliString s(static_cast<int>(letters.size()));
  for (std::size_t q = 0; q < letters.size(); ++q) {
    s.set(static_cast<int>(q), pauli_from_char(letters[q]));
  }
  return s;
}

PauliString PauliString::parse(int n_qubits, std::string_view text) {
  PauliString s(n_qubits);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (text.substr(pos) == "I") return s;
  while (pos < text.size()) {
    const Pauli p = pauli_from_char(text[pos++]);
    int q = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), q);
    if (ec != std::errc()) {
      throw ParseError(fmt::format("expected qubit index in '{}'", text));
    }
    pos = static_cast<std::size_t>(ptr - text.data());
    if (s.at(q) != Pauli::I) {
      throw ParseError(fmt::format("qubit {} repeated in '{}'", q, text));
    }
    s.set(q, p);
    skip_space();
  }
  return s;
}

Pauli PauliString::at(int qubit) const {
  check_qubit(n_qubits_, qubit);
  const int xb = static_cast<int>((x_ >> qubit) & 1U);
  const int zb = static_cast<int>((z_ >> qubit) & 1U);
  if (xb && zb) return Pauli::Y;
  if (xb) return Pauli::X;
  if (zb) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(int qubit, Pauli p) {
  check_qubit(n_qubits_, qubit);
  x_ &= ~bit(qubit);
  z_ &= ~bit(qubit);
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit(qubit);
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit(qubit);
}

int PauliString::weight() const { return std::popcount(x_ | z_); }
int PauliString::y_count() const { return std::popcount(x_ & z_); }

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::uint64_t m = x_ | z_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::map<int, Pauli> PauliString::letters() const {
  std::map<int, Pauli> out;
  for (int q : support()) out.emplace(q, at(q));
  return out;
}

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q : support()) {
    if (!out.empty()) out += ' ';
    out += to_char(at(q));
    out += std::to_string(q);
  }
  return out;
}

std::string PauliString::dense_str() const {
  std::string out;
  for (int q = 0; q < n_qubits_; ++q) out += to_char(at(q));
  return out;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(p.x_mask());
  h ^= std::hash<std::uint64_t>{}(p.z_mask()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(p.n_qubits());
}

cplx PhasedPauli::phase() const {
  static constexpr cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[phase_power & 3];
}

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError(
        fmt::format("cannot multiply {}- and {}-qubit strings", a.n_qubits(), b.n_qubits()));
  }
  PhasedPauli out{0, PauliString(a.n_qubits())};
  const std::uint64_t both = (a.x_mask() | a.z_mask()) & (b.x_mask() | b.z_mask());
  int phase = 0;
  for (std::uint64_t m = both; m != 0; m &= m - 1) {
    const int q = std::countr_zero(m);
    phase += kTable[static_cast<int>(a.at(q))][static_cast<int>(b.at(q))].phase;
  }
  out.phase_power = phase & 3;
  out.string =
      PauliString::from_masks(a.n_qubits(), a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
  return out;
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.string.n_qubits() != n_qubits_) throw DimensionError("PauliSum term has wrong width");
    if (!std::isfinite(t.coeff)) throw NumericalError("non-finite PauliSum coefficient");
  }
}

PauliSum PauliSum::single(const PauliString& s, double coeff) {
  return PauliSum(s.n_qubits(), {PauliTerm{coeff, s}});
}

void PauliSum::add(double coeff, const PauliString& s) {
  if (s.n_qubits() != n_qubits_) throw DimensionError("PauliSum term has wrong width");
  if (!std::isfinite(coeff)) throw NumericalError("non-finite PauliSum coefficient");
  for (auto& t : terms_) {
    if (t.string == s) {
      t.coeff += coeff;
      return;
    }
  }
  terms_.push_back({coeff, s});
}

void PauliSum::add(const PauliSum& other, double scale) {
  for (const auto& t : other.terms()) add(scale * t.coeff, t.string);
}

void PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const PauliTerm& t) { return std::abs(t.coeff) <= tol; });
}

std::vector<int> PauliSum::support() const {
  std::uint64_t mask = 0;
  for (const auto& t : terms_) mask |= t.string.x_mask() | t.string.z_mask();
  std::vector<int> out;
  for (; mask != 0; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

std::string PauliSum::str() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += fmt::format("{:.6g}*[{}]", t.coeff, t.string.str());
  }
  return out.empty() ? "0" : out;
}

std::string to_string(PoolKind kind) {
  switch (kind) {
    case PoolKind::PauliFull:
      return "pauli_full";
    case PoolKind::PauliOddY:
      return "pauli_odd_y";
    case PoolKind::FermionicNumberConserving:
      return "fermionic_number_conserving";
  }
  return "unknown";
}

PoolKind pool_kind_from_string(std::string_view name) {
  if (name == "pauli_full") return PoolKind::PauliFull;
  if (name == "pauli_odd_y") return PoolKind::PauliOddY;
  if (name == "fermionic_number_conserving") return PoolKind::FermionicNumberConserving;
  throw ParseError(fmt::format("unknown pool kind '{}'", name));
}

std::vector<PauliSum> enumerate_pool(const OperatorPool& pool) {
  const int d = static_cast<int>(pool.domain.size());
  if (d == 0) throw DomainError("operator pool needs a nonempty domain");
  std::vector<int> seen = pool.domain;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw DomainError("operator pool domain has repeated qubits");
  }
  for (int q : pool.domain) check_qubit(pool.n_qubits, q);

  if (pool.kind == PoolKind::FermionicNumberConserving) return fermionic_pool(pool);

  if (d > 12) throw ResourceError(fmt::format("Pauli pool on {} qubits is too large", d));
  std::vector<PauliSum> out;
  const std::uint64_t total = std::uint64_t{1} << (2 * d);
  out.reserve(pool.kind == PoolKind::PauliOddY ? odd_y_count(d) : total);
  for (std::uint64_t code = 0; code < total; ++code) {
    PauliString s(pool.n_qubits);
    for (int k = 0; k < d; ++k) {
      s.set(pool.domain[k], static_cast<Pauli>((code >> (2 * (d - 1 - k))) & 3U));
    }
    if (pool.kind == PoolKind::PauliOddY && s.y_count() % 2 == 0) continue;
    out.push_back(PauliSum::single(s));
  }
  return out;
}

std::uint64_t odd_y_count(int domain_size) {
  if (domain_size < 1) throw DomainError("odd_y_count needs D >= 1");
  if (domain_size > 31) throw ResourceError("odd_y_count overflows for D > 31");
  const std::uint64_t p = std::uint64_t{1} << domain_size;
  return p * (p - 1) / 2;
}

}  // namespace qitekit
