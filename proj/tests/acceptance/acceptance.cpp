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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails. Arguments select criteria by
// number; no arguments runs all of them.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracle/dense_oracle.hpp"
#include "qitekit/analysis.hpp"
#include "qitekit/hamiltonians.hpp"
#include "qitekit/qite.hpp"
#include "qitekit/qlanczos.hpp"
#include "qitekit/qmetts.hpp"

using namespace qitekit;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(fmt::format("{}{}", ok ? "" : "[fail] ", note));
  }
  void info(std::string note) { notes.push_back(std::move(note)); }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string neel(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i % 2) ? '1' : '0';
  return s;
}

// Index of a Z-basis label, qubit 0 = least significant bit.
std::uint64_t label_index(const std::string& label) {
  std::uint64_t i = 0;
  for (std::size_t q = 0; q < label.size(); ++q) i |= std::uint64_t(label[q] == '1') << q;
  return i;
}

double oracle_energy(const oracle::Mat& h, const oracle::Vec& v) { return v.dot(h * v).real(); }

double oracle_gibbs(const oracle::Mat& h, double beta) {
  const oracle::Mat rho = oracle::expm(-beta * h);
  return (h * rho).trace().real() / rho.trace().real();
}

bool monotone(const std::vector<double>& e, double tol) {
  for (std::size_t l = 1; l < e.size(); ++l) {
    if (e[l] > e[l - 1] + tol) return false;
  }
  return true;
}

// Smallest beta from which |E - e0| / |e0| stays within `tol` for the rest
// of the series; infinity if the last point is outside.
template <typename Beta, typename Energy>
double converged_beta(std::size_t count, Beta beta, Energy energy, double e0, double tol) {
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t k = count; k-- > 0;) {
    if (std::abs((energy(k) - e0) / e0) > tol) break;
    b = beta(k);
  }
  return b;
}

// Heisenberg chains with exact domains from the Neel state.
QiteConfig exact_domain_config(int n, int steps) {
  QiteConfig c;
  c.dtau = 0.1;
  c.n_steps = steps;
  c.domain_size = n;
  return c;
}

Trajectory& heisenberg_exact_trajectory(int n) {
  static std::map<int, Trajectory> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache
             .emplace(n, qite_evolve(StateVector::product(neel(n)), heisenberg_1d(n, 1.0, 0.0),
                                     exact_domain_config(n, 50)))
             .first;
  }
  return it->second;
}

Outcome criterion1() {
  Outcome o;
  for (int n : {4, 6}) {
    const Stopwatch clock;
    const Trajectory& t = heisenberg_exact_trajectory(n);
    const double secs = clock.seconds();
    const oracle::Mat h = oracle::heisenberg(n, 1.0, 0.0);
    const double e0 = oracle::ground_energy(h);
    const double rel = std::abs((t.energies.back() - e0) / e0);
    const oracle::Vec ex = oracle::ite(h, oracle::basis(n, label_index(neel(n))), 5.0);
    o.check(rel < 1e-3, fmt::format("n={} rel err {:.3e} < 1e-3 (exact ITE itself {:.3e})", n, rel,
                                    std::abs((oracle_energy(h, ex) - e0) / e0)));
    o.check(monotone(t.energies, 1e-9), fmt::format("n={} monotone within 1e-9", n));
    o.check(secs < 30.0, fmt::format("n={} runtime {:.1f}s < 30s", n, secs));
  }
  // Reference only: a product state without weight on the lowest triplet.
  const Hamiltonian h6 = heisenberg_1d(6, 1.0, 0.0);
  const Trajectory alt =
      qite_evolve(StateVector::product("011001"), h6, exact_domain_config(6, 50));
  const double e0 = oracle::ground_energy(oracle::heisenberg(6, 1.0, 0.0));
  o.info(fmt::format("info: n=6 from |011001> rel err {:.3e}, monotone {}",
                     std::abs((alt.energies.back() - e0) / e0), monotone(alt.energies, 1e-9)));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const int n = 6;
  const Hamiltonian h = heisenberg_1d(n, 1.0, 0.0);
  const double e0 = oracle::ground_energy(oracle::heisenberg(n, 1.0, 0.0));
  std::vector<double> errors;
  for (int d : {2, 4, 6}) {
    const Trajectory t =
        d == n ? heisenberg_exact_trajectory(n)
               : qite_evolve(StateVector::product(neel(n)), h, exact_domain_config(d, 50));
    const double err = std::abs((t.energies.back() - e0) / e0);
    const double lowest = *std::min_element(t.energies.begin(), t.energies.end());
    o.check(lowest >= e0 - 1e-9, fmt::format("D={} min E - E0 = {:.3e} >= -1e-9", d, lowest - e0));
    o.info(fmt::format("D={} rel err {:.3e}", d, err));
    errors.push_back(err);
  }
  o.check(errors[1] <= errors[0] && errors[2] <= errors[1], "error non-increasing in D");
  return o;
}

Outcome criterion3() {
  Outcome o;
  struct Case {
    std::string name;
    Hamiltonian h;
    std::string label;
  };
  const std::vector<Case> cases = {
      {"heisenberg n=4", heisenberg_1d(4, 1.0, 0.0), "0101"},
      {"heisenberg+field n=3", heisenberg_1d(3, 1.0, 0.3), "010"},
      {"tfi n=4", tfi_1d(4, 1.0, 0.8), "0000"},
  };
  for (const auto& c : cases) {
    for (int d = 2; d <= c.h.n_qubits; ++d) {
      QiteConfig full;
      full.dtau = 0.1;
      full.n_steps = 20;
      full.domain_size = d;
      QiteConfig odd = full;
      odd.pool_kind = PoolKind::PauliOddY;
      const StateVector s0 = StateVector::product(c.label);
      const Trajectory a = qite_evolve(s0, c.h, full);
      const Trajectory b = qite_evolve(s0, c.h, odd);
      double worst = 0.0;
      for (std::size_t l = 0; l < a.energies.size(); ++l) {
        worst = std::max(worst, std::abs(a.energies[l] - b.energies[l]));
      }
      o.check(worst <= 1e-8, fmt::format("{} D={} max |dE| {:.2e}", c.name, d, worst));
    }
  }
  bool sizes = true;
  for (int d = 1; d <= 5; ++d) {
    const std::uint64_t closed = (std::uint64_t{1} << d) * ((std::uint64_t{1} << d) - 1) / 2;
    const auto pool = enumerate_pool({PoolKind::PauliOddY, std::vector<int>([d] {
                                        std::vector<int> v(d);
                                        for (int k = 0; k < d; ++k) v[k] = k;
                                        return v;
                                      }()),
                                      d});
    sizes = sizes && pool.size() == closed && odd_y_count(d) == closed;
  }
  bool recursion = true;
  for (int d = 1; d <= 4; ++d) {
    const std::uint64_t y = odd_y_count(d);
    recursion = recursion && odd_y_count(d + 1) == 3 * y + ((std::uint64_t{1} << (2 * d)) - y);
  }
  o.check(sizes, "pool sizes = 2^D(2^D-1)/2 for D <= 5");
  o.check(recursion, "y(D+1) = 3y(D) + 4^D - y(D) for D <= 4");
  return o;
}

Outcome criterion4() {
  Outcome o;
  QlanczosOptions opts;
  opts.s = 0.999;
  opts.eps = 1e-8;
  for (int n : {4, 6}) {
    QiteConfig c = exact_domain_config(n, 100);
    c.trotter_order = 2;
    c.b_mode = BMode::kExactDelta0;
    const QlanczosRun run =
        qlanczos_run(heisenberg_1d(n, 1.0, 0.0), StateVector::product(neel(n)), c, opts);
    const double e0 = oracle::ground_energy(oracle::heisenberg(n, 1.0, 0.0));
    const auto& p = run.points;
    double worst = -std::numeric_limits<double>::infinity();
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& pt : p) {
      worst = std::max(worst, pt.e_qlanczos - pt.e_qite);
      lowest = std::min(lowest, pt.e_qlanczos);
    }
    auto beta = [&](std::size_t k) { return p[k].beta; };
    const double bq =
        converged_beta(p.size(), beta, [&](std::size_t k) { return p[k].e_qite; }, e0, 1e-4);
    const double bl =
        converged_beta(p.size(), beta, [&](std::size_t k) { return p[k].e_qlanczos; }, e0, 1e-4);
    o.check(worst <= 1e-9, fmt::format("n={} max(E_QL - E_QITE) = {:.2e} <= 1e-9", n, worst));
    o.check(bl <= 0.5 * bq,
            fmt::format("n={} 1e-4 reached at beta {} (QLanczos) vs {} (QITE)", n, bl, bq));
    o.info(fmt::format("n={} min E_QL - E0 = {:.2e}", n, lowest - e0));
  }

  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const oracle::Mat h = oracle::heisenberg(n, 1.0, 0.0);
    const Hamiltonian model = heisenberg_1d(n, 1.0, 0.0);
    const std::string label = neel(n);
    const int steps = 20;
    const double dtau = 0.1;
    const KrylovLedger ledger =
        exact_ite_ledger(StateVector::product(label), spectral_decomposition(model), dtau, steps);
    const KrylovMatrices m = build_matrices(ledger, Parity::kEven);
    std::vector<oracle::Vec> states;
    for (int l : m.indices) {
      states.push_back(oracle::ite(h, oracle::basis(n, label_index(label)), l * dtau));
    }
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = 0; b < states.size(); ++b) {
        const auto ai = static_cast<Eigen::Index>(a);
        const auto bi = static_cast<Eigen::Index>(b);
        worst = std::max(worst, std::abs(m.s(ai, bi) - states[a].dot(states[b]).real()));
        worst = std::max(worst, std::abs(m.h(ai, bi) - states[a].dot(h * states[b]).real()));
      }
    }
  }
  o.check(worst <= 1e-10,
          fmt::format("norm-identity S, H vs dense overlaps (n<=4) max dev {:.2e}", worst));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Hamiltonian h = heisenberg_1d(4, 1.0, 0.0);
  QlanczosOptions opts;
  opts.s = 0.75;
  opts.eps = 1e-2;
  int finite = 0;
  int thrown = 0;
  std::string first_error;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    try {
      QiteConfig c;
      c.dtau = 0.1;
      c.n_steps = 20;
      c.domain_size = 2;
      c.delta = 0.01;
      c.noise_sigma = 1e-3;
      c.noise_seed = seed;
      const Trajectory t = qite_evolve(StateVector::product("0101"), h, c);
      const KrylovLedger ledger = perturb_ledger(ledger_from_trajectory(t), 1e-3, seed);
      const auto points = qlanczos_series(ledger, c.dtau, opts);
      const bool ok = std::all_of(points.begin(), points.end(), [](const QlanczosPoint& p) {
        return std::isfinite(p.e_qlanczos) && std::isfinite(p.e_qite);
      });
      finite += ok;
    } catch (const std::exception& e) {
      ++thrown;
      if (first_error.empty()) first_error = e.what();
    }
  }
  o.check(thrown == 0, fmt::format("{} of 100 seeds threw{}", thrown,
                                   first_error.empty() ? "" : " (" + first_error + ")"));
  o.check(finite == 100, fmt::format("{} of 100 seeds all-finite", finite));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Stopwatch clock;
  const Hamiltonian h = heisenberg_1d(4, 1.0, 0.0);
  const oracle::Mat hd = oracle::heisenberg(4, 1.0, 0.0);
  for (double beta : {1.0, 2.0, 4.0}) {
    MettsConfig c;
    c.beta = beta;
    c.qite.domain_size = 4;
    c.qite.pool_kind = PoolKind::PauliOddY;
    c.n_samples = 210;
    c.n_warmup = 10;
    const auto est = block_error(sample_values(metts_chain(h, c)), c.n_warmup);
    const double g = oracle_gibbs(hd, beta);
    o.check(std::abs(est.mean - g) <= 3.0 * est.stderr_block,
            fmt::format("n=4 beta={} mean {:.4f} gibbs {:.4f} stderr {:.4f}", beta, est.mean, g,
                        est.stderr_block));
  }
  for (double beta : {1.0, 2.0, 4.0}) {
    MettsConfig c;
    c.beta = beta;
    c.qite.domain_size = 1;
    c.n_samples = 210;
    c.n_warmup = 10;
    const Hamiltonian field = one_qubit_field(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    const auto est = block_error(sample_values(metts_chain(field, c)), c.n_warmup);
    o.check(std::abs(est.mean + std::tanh(beta)) <= 3.0 * est.stderr_block,
            fmt::format("1 qubit beta={} mean {:.4f} vs -tanh {:.4f} stderr {:.4f}", beta, est.mean,
                        -std::tanh(beta), est.stderr_block));
  }
  const double secs = clock.seconds();
  o.check(secs < 300.0, fmt::format("runtime {:.0f}s < 300s", secs));
  return o;
}

Outcome criterion7() {
  Outcome o;
  struct Golden {
    CostQuery q;
    std::uint64_t value;
  };
  const std::vector<Golden> golden = {
      {{.k = 4, .t = 7, .d = 4}, 12'544},
      {{.k = 6, .t = 17, .d = 4}, 47'872},
      {{.k = 4, .t = 7, .d = 4}, 12'544},
      {{.k = 6, .t = 8, .d = 4}, 22'528},
      {{.k = 4, .t = 7, .d = 4, .odd_y = true}, 5'880},
      {{.k = 6, .t = 17, .d = 4, .odd_y = true}, 22'440},
      {{.k = 6, .t = 8, .d = 4, .odd_y = true}, 10'560},
  };
  for (const auto& g : golden) {
    const std::uint64_t got = qite_measurement_count(g.q);
    o.check(got == g.value, fmt::format("K={} T={} D={}{} -> {} (expected {})", g.q.k, g.q.t, g.q.d,
                                        g.q.odd_y ? " odd-Y" : "", got, g.value));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<Edge> edges = {{0, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5}, {4, 5}};
  const Hamiltonian h = maxcut(edges, 6);
  const oracle::Mat hd = oracle::maxcut(6, edges);
  const StateVector plus = StateVector::product("++++++");
  const int c_max = 5;

  // Optimal strings by exhaustive count; the dense diagonal is the oracle.
  int optimal = 0;
  for (Eigen::Index z = 0; z < hd.rows(); ++z) optimal += std::abs(hd(z, z).real() + c_max) < 1e-12;
  const double p0 = maxcut_success(plus, h, c_max);
  o.check(optimal == 6 && std::abs(p0 - 6.0 / 64.0) < 1e-12,
          fmt::format("uniform baseline P = {:.6f} ({} optimal strings)", p0, optimal));

  auto run = [&](int d, int steps) {
    QiteConfig c;
    c.dtau = 0.1;
    c.n_steps = steps;
    c.domain_size = d;
    std::vector<double> p = {p0};
    qite_evolve(plus, h, c,
                [&](int, const StateVector& s) { p.push_back(maxcut_success(s, h, c_max)); });
    return p;
  };

  const std::vector<double> exact_d = run(6, 40);
  oracle::Vec v = oracle::ite(hd, plus.amplitudes(), 4.0);
  double p_oracle = 0.0;
  for (Eigen::Index z = 0; z < hd.rows(); ++z) {
    if (std::abs(hd(z, z).real() + c_max) < 1e-12) p_oracle += std::norm(v[z]);
  }
  o.check(exact_d.back() >= 0.99,
          fmt::format("D=6 P(beta=4) = {:.4f} >= 0.99 (exact ITE gives {:.4f})", exact_d.back(),
                      p_oracle));

  const std::vector<double> d2 = run(2, 30);
  std::size_t first = d2.size();
  for (std::size_t l = 0; l < d2.size(); ++l) {
    if (d2[l] > 0.6) {
      first = l;
      break;
    }
  }
  double min_after = std::numeric_limits<double>::infinity();
  for (std::size_t l = first; l < d2.size(); ++l) min_after = std::min(min_after, d2[l]);
  o.check(
      first < d2.size() && min_after > 0.6,
      fmt::format("D=2 P > 0.6 from beta = {:.1f} through 3 (min {:.4f})", 0.1 * first, min_after));
  return o;
}

// Mutual information from an oracle state by explicit partial trace.
double oracle_mutual_information(const oracle::Vec& v, int n, int i, int j) {
  auto entropy = [](const oracle::Mat& rho) {
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double p = es.eigenvalues()[k];
      if (p > 1e-15) s -= p * std::log(p);
    }
    return s;
  };
  auto reduced = [&](const std::vector<int>& qs) {
    const Eigen::Index dim = Eigen::Index{1} << qs.size();
    oracle::Mat rho = oracle::Mat::Zero(dim, dim);
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      for (Eigen::Index b = 0; b < v.size(); ++b) {
        bool same_rest = true;
        Eigen::Index la = 0;
        Eigen::Index lb = 0;
        for (int q = 0; q < n; ++q) {
          const auto it = std::find(qs.begin(), qs.end(), q);
          const int ba = (a >> q) & 1;
          const int bb = (b >> q) & 1;
          if (it == qs.end()) {
            same_rest = same_rest && ba == bb;
          } else {
            la |= Eigen::Index(ba) << (it - qs.begin());
            lb |= Eigen::Index(bb) << (it - qs.begin());
          }
        }
        if (same_rest) rho(la, lb) += v[a] * std::conj(v[b]);
      }
    }
    return rho;
  };
  return entropy(reduced({i})) + entropy(reduced({j})) - entropy(reduced({i, j}));
}

Outcome criterion9() {
  Outcome o;
  const int n = 8;
  const Hamiltonian h = tfi_1d(n, -1.0, -1.25);
  const SpectralDecomposition spectrum = spectral_decomposition(h);
  const StateVector s0(n);
  std::vector<double> betas;
  for (int k = 0; k <= 40; ++k) betas.push_back(0.25 * k);
  std::vector<std::vector<double>> mi;
  StateVector at6;
  StateVector at10;
  for (double beta : betas) {
    const StateVector s = exact_ite(s0, spectrum, beta);
    std::vector<double> row;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) row.push_back(mutual_information(s, i, j));
    }
    mi.push_back(std::move(row));
    if (beta == 6.0) at6 = s;
    if (beta == 10.0) at10 = s;
  }
  double worst_drop = 0.0;
  for (std::size_t b = 1; b < mi.size(); ++b) {
    for (std::size_t k = 0; k < mi[b].size(); ++k)
      worst_drop = std::max(worst_drop, mi[b - 1][k] - mi[b][k]);
  }
  double saturation = 0.0;
  const std::size_t i6 = 24;
  for (std::size_t k = 0; k < mi[i6].size(); ++k) {
    saturation = std::max(saturation, std::abs(mi[i6][k] - mi.back()[k]));
  }
  o.check(worst_drop <= 1e-8,
          fmt::format("largest decrease of any I(i,j) over the beta grid {:.2e}", worst_drop));
  o.check(saturation <= 1e-3, fmt::format("max |I(6) - I(10)| = {:.2e}", saturation));

  const oracle::Mat hd = oracle::tfi(n, -1.0, -1.25);
  const oracle::Vec ground = oracle::ground_state(hd);
  const oracle::Vec ref = oracle::ite(hd, oracle::basis(n, 0), 10.0);
  const double fid = std::norm(ground.dot(at10.amplitudes()));
  o.check(fid >= 1.0 - 1e-6, fmt::format("fidelity at beta=10: 1 - {:.2e}", 1.0 - fid));
  const double dev = (ref - at10.amplitudes() *
                                (ref.dot(at10.amplitudes()) / std::abs(ref.dot(at10.amplitudes()))))
                         .norm();
  double mi_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      mi_dev = std::max(mi_dev, std::abs(mutual_information(at6, i, j) -
                                         oracle_mutual_information(
                                             oracle::ite(hd, oracle::basis(n, 0), 6.0), n, i, j)));
    }
  }
  o.check(dev <= 1e-8 && mi_dev <= 1e-8,
          fmt::format("state vs dense propagator {:.1e}, I(i,j) vs partial-trace oracle {:.1e}",
                      dev, mi_dev));
  return o;
}

// Embeds a local operator (local bit j = qubit support[j]) into n qubits.
oracle::Mat embed(const oracle::Mat& local, const std::vector<int>& support, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::uint64_t mask = 0;
  for (int q : support) mask |= std::uint64_t{1} << q;
  auto local_index = [&](std::uint64_t i) {
    Eigen::Index l = 0;
    for (std::size_t j = 0; j < support.size(); ++j) l |= Eigen::Index((i >> support[j]) & 1U) << j;
    return l;
  };
  oracle::Mat full = oracle::Mat::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      if ((std::uint64_t(a) & ~mask) != (std::uint64_t(b) & ~mask)) continue;
      full(a, b) = local(local_index(a), local_index(b));
    }
  }
  return full;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;
    const int k = 1 + trial % std::min(n, 3);
    std::vector<int> qubits(n);
    for (int q = 0; q < n; ++q) qubits[q] = q;
    std::shuffle(qubits.begin(), qubits.end(), rng);
    const std::vector<int> support(qubits.begin(), qubits.begin() + k);
    const oracle::Mat local = oracle::random_hermitian(1 << k, rng);
    const oracle::Vec psi = oracle::random_state(n, rng);
    const double dtau = 0.05 + 0.1 * (trial % 4);
    const auto r = apply_term_exp(StateVector::from_amplitudes(psi), support, local, dtau);
    oracle::Vec ref = oracle::expm(-dtau * embed(local, support, n)) * psi;
    const double c = ref.squaredNorm();
    ref /= std::sqrt(c);
    worst = std::max({worst, (r.state.amplitudes() - ref).norm(), std::abs(r.c - c)});
  }
  o.check(worst <= 1e-10,
          fmt::format("apply_term_exp vs dense expm, 60 random terms: {:.1e}", worst));

  // c = 1 - 2 dtau <h> + O(dtau^2).
  const int n = 4;
  const std::vector<int> support = {1, 2};
  const oracle::Mat local = oracle::random_hermitian(4, rng);
  const oracle::Vec psi = oracle::random_state(n, rng);
  const double mean_h = psi.dot(embed(local, support, n) * psi).real();
  std::vector<double> dtaus;
  std::vector<double> residuals;
  for (double dtau = 0.08; dtau > 0.004; dtau /= 2) {
    const auto r = apply_term_exp(StateVector::from_amplitudes(psi), support, local, dtau);
    dtaus.push_back(dtau);
    residuals.push_back(std::abs(r.c - (1.0 - 2.0 * dtau * mean_h)));
  }
  const double norm_slope = slope(dtaus, residuals);
  o.check(std::abs(norm_slope - 2.0) < 0.1,
          fmt::format("first-order norm residual slope {:.3f} (2)", norm_slope));

  // Trotter error at beta = 1 on n = 4 TFI with exact domains.
  const Hamiltonian tfi = tfi_1d(4, 1.0, 0.8);
  const oracle::Mat hd = oracle::tfi(4, 1.0, 0.8);
  const oracle::Vec exact = oracle::ite(hd, oracle::basis(4, 0), 1.0);
  for (int order : {1, 2}) {
    std::vector<double> xs;
    std::vector<double> errs;
    for (int steps : {10, 20, 40}) {
      QiteConfig c;
      c.dtau = 1.0 / steps;
      c.n_steps = steps;
      c.domain_size = 4;
      c.trotter_order = order;
      c.b_mode = BMode::kExactDelta0;
      c.record_coeffs = false;
      const Trajectory t = qite_evolve(StateVector(4), tfi, c);
      const oracle::Vec& s = t.final_state.amplitudes();
      const std::complex<double> ov = exact.dot(s);
      xs.push_back(c.dtau);
      errs.push_back((s * (std::conj(ov) / std::abs(ov)) - exact).norm());
    }
    const double sl = slope(xs, errs);
    o.check(std::abs(sl - order) < 0.2,
            fmt::format("order {} Trotter error slope {:.3f} ({})", order, sl, order));
  }
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"exact-domain QITE convergence", criterion1},
      {"inexact-D hierarchy", criterion2},
      {"odd-Y reduction equivalence", criterion3},
      {"QLanczos exact-case guarantee", criterion4},
      {"QLanczos noise robustness", criterion5},
      {"QMETTS thermal accuracy", criterion6},
      {"measurement-count golden values", criterion7},
      {"MAXCUT", criterion8},
      {"correlation saturation", criterion9},
      {"numerical kernel oracles", criterion10},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(criteria().size()); ++k) selected.push_back(k);
  }
  bool all_pass = true;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(criteria().size())) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    const auto& [name, fn] = criteria()[static_cast<std::size_t>(k - 1)];
    const Stopwatch clock;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.check(false, fmt::format("exception: {}", e.what()));
    }
    all_pass = all_pass && out.pass;
    std::string detail;
    for (const auto& note : out.notes) detail += (detail.empty() ? "" : "; ") + note;
    std::cout << fmt::format("criterion {:2d} {}: {} ({:.1f}s) {}\n", k, out.pass ? "PASS" : "FAIL",
                             name, clock.seconds(), detail)
              << std::flush;
  }
  return all_pass ? 0 : 1;
}
