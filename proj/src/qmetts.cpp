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

#include "qitekit/qmetts.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

#include "qitekit/errors.hpp"

namespace qitekit {

std::string to_string(BasisSchedule s) {
  return s == BasisSchedule::kAlternating ? "alternating" : "all_z";
}

BasisSchedule basis_schedule_from_string(std::string_view name) {
  if (name == "alternating") return BasisSchedule::kAlternating;
  if (name == "all_z") return BasisSchedule::kAllZ;
  throw ParseError(fmt::format("unknown basis schedule '{}'", name));
}

QiteConfig MettsConfig::default_qite() {
  QiteConfig q;
  q.b_mode = BMode::kExactDelta0;
  q.record_coeffs = false;
  return q;
}

int MettsConfig::propagation_steps() const {
  const double steps = beta / (2.0 * qite.dtau);
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9) {
    throw DomainError(fmt::format("beta / (2 dtau) = {} is not an integer", steps));
  }
  return static_cast<int>(rounded);
}

void MettsConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be non-negative");
  qite.validate();
  if (n_warmup < 0) throw DomainError("n_warmup must be non-negative");
  if (n_samples <= n_warmup) throw DomainError("n_samples must exceed n_warmup");
  propagation_steps();
}

std::vector<MettsSample> metts_chain(const Hamiltonian& h, const MettsConfig& config,
                                     const std::optional<PauliSum>& observable) {
  config.validate();
  if (observable && observable->n_qubits() != h.n_qubits) {
    throw DimensionError("observable width differs from the Hamiltonian");
  }
  const int n = h.n_qubits;
  QiteConfig qc = config.qite;
  qc.n_steps = config.propagation_steps();

  std::mt19937_64 rng(config.seed);
  std::string label(static_cast<std::size_t>(n), '0');
  for (char& c : label) c = (rng() >> 63) ? '1' : '0';
  Basis basis = Basis::Z;

  std::vector<MettsSample> out;
  out.reserve(static_cast<std::size_t>(config.n_samples));
  for (int step = 1; step <= config.n_samples; ++step) {
    const StateVector start = StateVector::product(label);
    const StateVector phi = qc.n_steps == 0 ? start : qite_evolve(start, h, qc).final_state;
    const double value = observable ? expectation(phi, *observable) : energy(phi, h);
    if (!std::isfinite(value)) throw NumericalError("METTS observable is not finite");
    out.push_back({step, label, basis, value});

    const Basis next =
        config.schedule == BasisSchedule::kAlternating && step % 2 == 1 ? Basis::X : Basis::Z;
    const std::vector<Basis> bases(static_cast<std::size_t>(n), next);
    label = measure_collapse(phi, bases, rng).label;
    basis = next;
  }
  return out;
}

BlockEstimate block_error(std::span<const double> values, int discard) {
  if (discard < 0) throw DomainError("discard must be non-negative");
  if (static_cast<int>(values.size()) - discard < 8) {
    throw DomainError("block analysis needs at least 8 values after warmup");
  }
  std::vector<double> x(values.begin() + discard, values.end());
  BlockEstimate est;
  est.n_values = static_cast<int>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  est.mean = sum / static_cast<double>(x.size());

  while (x.size() >= 8) {
    const auto m = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= m;
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    c0 /= m;
    est.stderr_block = std::max(est.stderr_block, std::sqrt(c0 / (m - 1.0)));

    std::vector<double> next(x.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (x[2 * i] + x[2 * i + 1]);
    x = std::move(next);
  }
  return est;
}

double integrated_autocorrelation_time(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw DomainError("autocorrelation needs at least one chain");
  const std::size_t n = chains.front().size();
  if (n < 2) throw DomainError("autocorrelation needs at least 2 values per chain");
  double mean = 0.0;
  for (const auto& c : chains) {
    if (c.size() != n) throw DimensionError("chains differ in length");
    for (double v : c) mean += v;
  }
  mean /= static_cast<double>(n * chains.size());
  auto autocov = [&](std::size_t t) {
    double acc = 0.0;
    for (const auto& c : chains) {
      for (std::size_t i = 0; i + t < n; ++i) acc += (c[i] - mean) * (c[i + t] - mean);
    }
    return acc / static_cast<double>(n * chains.size());
  };
  const double c0 = autocov(0);
  if (c0 == 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t w = 1; w < n; ++w) {
    tau += 2.0 * autocov(w) / c0;
    if (static_cast<double>(w) >= 5.0 * tau) break;
  }
  return tau;
}

double integrated_autocorrelation_time(std::span<const double> values) {
  return integrated_autocorrelation_time(
      std::vector<std::vector<double>>{{values.begin(), values.end()}});
}

std::vector<double> sample_values(const std::vector<MettsSample>& samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.value);
  return v;
}

}  // namespace qitekit
