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

#include "runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "qitekit/errors.hpp"

namespace qitekit::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Dense oracles (spectra, exact propagation) are computed up to this size.
constexpr int kOracleQubits = 10;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json();
}

// Probability of the lowest eigenspace (degeneracy within 1e-9).
double ground_space_fidelity(const SpectralDecomposition& spectrum, const StateVector& s) {
  double f = 0.0;
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
    if (spectrum.eigenvalues[k] > spectrum.eigenvalues[0] + 1e-9) break;
    f += std::norm(spectrum.eigenvectors.col(k).dot(s.amplitudes()));
  }
  return f;
}

int max_cut(const Hamiltonian& h) {
  int best = 0;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << h.n_qubits); ++z) {
    best = std::max(best, cut_value(h.edges, z));
  }
  return best;
}

PauliSum observable_of(const Hamiltonian& h) {
  PauliSum s = h.total();
  if (h.offset != 0.0) s.add(h.offset, PauliString(h.n_qubits));
  return s;
}

struct Prepared {
  Hamiltonian h;
  StateVector state0;
  std::string label;
};

// Everything that can fail on bad input is checked here, before any output
// exists.
std::optional<Prepared> preflight(const ExperimentConfig& cfg, int max_qubits) {
  if (cfg.algorithm == Algorithm::kCount) return std::nullopt;
  const fs::path base = cfg.source.has_parent_path() ? cfg.source.parent_path() : fs::path(".");
  Prepared p;
  try {
    p.h = build_model(*cfg.model, base);
  } catch (const ResourceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: model: {}", cfg.source.string(), e.what()));
  }
  const int n = p.h.n_qubits;
  if (n > max_qubits) {
    throw ResourceError(fmt::format("model needs {} qubits; the limit is {}", n, max_qubits));
  }
  if (cfg.algorithm == Algorithm::kMutualInfo && n > kOracleQubits) {
    throw ResourceError(
        fmt::format("mutualinfo uses dense propagation, limited to {} qubits", kOracleQubits));
  }
  p.label = cfg.initial_state.empty() ? default_initial_state(p.h) : cfg.initial_state;
  if (static_cast<int>(p.label.size()) != n) {
    throw ConfigError(
        fmt::format("{}: initial_state '{}' has {} characters; the model has {} qubits",
                    cfg.source.string(), p.label, p.label.size(), n));
  }
  try {
    p.state0 = StateVector::product(p.label);
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: initial_state: {}", cfg.source.string(), e.what()));
  }
  const QiteConfig* q = nullptr;
  if (cfg.algorithm == Algorithm::kQite || cfg.algorithm == Algorithm::kQlanczos) q = &cfg.qite;
  if (cfg.algorithm == Algorithm::kQmetts) q = &cfg.qmetts.qite;
  if (q) {
    if (q->domain_size < p.h.max_support()) {
      throw ConfigError(
          fmt::format("{}: qite.domain_size {} is smaller than the largest term support {}",
                      cfg.source.string(), q->domain_size, p.h.max_support()));
    }
    if (std::min(q->domain_size, n) > q->max_domain_qubits) {
      throw ResourceError(fmt::format("domain of {} qubits exceeds max_domain_qubits = {}",
                                      std::min(q->domain_size, n), q->max_domain_qubits));
    }
  }
  return p;
}

class Phases {
 public:
  template <typename F>
  auto time(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      timings_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  }
  const ordered_json& json() const { return timings_; }

 private:
  ordered_json timings_ = ordered_json::object();
};

struct Outputs {
  std::vector<std::pair<std::string, Table>> tables;
  ordered_json summary = ordered_json::object();
};

std::optional<SpectralDecomposition> oracle_spectrum(const Hamiltonian& h) {
  if (h.n_qubits > kOracleQubits) return std::nullopt;
  return spectral_decomposition(h);
}

Outputs run_qite(const ExperimentConfig& cfg, const Prepared& p, Phases& phases) {
  const auto spectrum = phases.time("oracle", [&] { return oracle_spectrum(p.h); });
  const bool is_maxcut = p.h.model == "maxcut";
  const int c_max = is_maxcut ? max_cut(p.h) : 0;
  const bool fid = cfg.report_fidelity && spectrum.has_value();

  std::vector<double> fidelities;
  std::vector<double> success;
  auto observe = [&](const StateVector& s) {
    if (fid) fidelities.push_back(ground_space_fidelity(*spectrum, s));
    if (is_maxcut) success.push_back(maxcut_success(s, p.h, c_max));
  };
  observe(p.state0);
  const Trajectory t = phases.time("qite", [&] {
    return qite_evolve(p.state0, p.h, cfg.qite, [&](int, const StateVector& s) { observe(s); });
  });

  Table table{{"sweep", "beta", "energy"}, {}};
  if (fid) table.header.push_back("fidelity");
  if (is_maxcut) table.header.push_back("p_success");
  bool monotone = true;
  for (std::size_t l = 0; l < t.energies.size(); ++l) {
    std::vector<std::string> row = {std::to_string(l), format_number(t.betas[l]),
                                    format_number(t.energies[l])};
    if (fid) row.push_back(format_number(fidelities[l]));
    if (is_maxcut) row.push_back(format_number(success[l]));
    table.rows.push_back(std::move(row));
    if (l > 0 && t.energies[l] > t.energies[l - 1] + 1e-9) monotone = false;
  }

  Outputs out;
  ordered_json& s = out.summary;
  s["final_beta"] = t.betas.back();
  s["final_energy"] = t.energies.back();
  s["monotone"] = monotone;
  if (spectrum) {
    const double e0 = spectrum->eigenvalues[0];
    s["e0"] = e0;
    s["relative_error"] = number_or_null(std::abs((t.energies.back() - e0) / e0));
    s["variational_ok"] =
        std::all_of(t.energies.begin(), t.energies.end(), [&](double e) { return e >= e0 - 1e-9; });
  }
  if (fid) s["final_fidelity"] = fidelities.back();
  if (is_maxcut) {
    s["c_max"] = c_max;
    s["final_p_success"] = success.back();
  }
  s["qite_steps"] = t.steps.size();
  out.tables.emplace_back("qite.csv", std::move(table));
  return out;
}

Outputs run_qlanczos(const ExperimentConfig& cfg, const Prepared& p, Phases& phases) {
  const Trajectory t = phases.time("qite", [&] { return qite_evolve(p.state0, p.h, cfg.qite); });
  KrylovLedger ledger = ledger_from_trajectory(t);
  if (cfg.ledger_noise > 0.0) ledger = perturb_ledger(ledger, cfg.ledger_noise, cfg.seed);
  const auto points =
      phases.time("qlanczos", [&] { return qlanczos_series(ledger, cfg.qite.dtau, cfg.qlanczos); });
  const auto spectrum = phases.time("oracle", [&] { return oracle_spectrum(p.h); });

  Table table{{"beta", "e_qite", "e_qlanczos", "n_retained"}, {}};
  bool below = true;
  for (const auto& pt : points) {
    table.rows.push_back({format_number(pt.beta), format_number(pt.e_qite),
                          format_number(pt.e_qlanczos), std::to_string(pt.n_retained)});
    below = below && pt.e_qlanczos <= pt.e_qite + 1e-9;
  }
  Outputs out;
  ordered_json& s = out.summary;
  s["final_beta"] = points.back().beta;
  s["final_e_qite"] = points.back().e_qite;
  s["final_e_qlanczos"] = points.back().e_qlanczos;
  s["qlanczos_below_qite"] = below;
  if (spectrum) s["e0"] = spectrum->eigenvalues[0];
  out.tables.emplace_back("qlanczos.csv", std::move(table));
  return out;
}

Outputs run_qmetts(const ExperimentConfig& cfg, const Prepared& p, Phases& phases) {
  const auto samples = phases.time("qmetts", [&] { return metts_chain(p.h, cfg.qmetts); });
  Table table{{"sample", "label", "value"}, {}};
  for (const auto& smp : samples) {
    table.rows.push_back({std::to_string(smp.step), smp.product_label, format_number(smp.value)});
  }
  const BlockEstimate est = block_error(sample_values(samples), cfg.qmetts.n_warmup);
  Outputs out;
  ordered_json& s = out.summary;
  s["mean"] = est.mean;
  s["stderr_block"] = est.stderr_block;
  s["n_values"] = est.n_values;
  if (p.h.n_qubits <= kOracleQubits) {
    const double g = gibbs_average(p.h, observable_of(p.h), cfg.qmetts.beta);
    s["gibbs"] = g;
    s["within_3_stderr"] = std::abs(est.mean - g) <= 3.0 * est.stderr_block;
  }
  out.tables.emplace_back("qmetts.csv", std::move(table));
  return out;
}

Outputs run_mutualinfo(const ExperimentConfig& cfg, const Prepared& p, Phases& phases) {
  const auto spectrum = phases.time("oracle", [&] { return spectral_decomposition(p.h); });
  const int n = p.h.n_qubits;
  Table mi{{"beta", "i", "j", "mutual_information"}, {}};
  Table fid{{"beta", "fidelity"}, {}};
  std::vector<std::vector<double>> series;
  phases.time("mutualinfo", [&] {
    for (double beta : cfg.mi_betas) {
      const StateVector s = exact_ite(p.state0, spectrum, beta);
      std::vector<double> row;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double v = mutual_information(s, i, j);
          row.push_back(v);
          mi.rows.push_back(
              {format_number(beta), std::to_string(i), std::to_string(j), format_number(v)});
        }
      }
      series.push_back(std::move(row));
      fid.rows.push_back({format_number(beta), format_number(ground_space_fidelity(spectrum, s))});
    }
  });
  double max_decrease = 0.0;
  for (std::size_t b = 1; b < series.size(); ++b) {
    for (std::size_t k = 0; k < series[b].size(); ++k) {
      max_decrease = std::max(max_decrease, series[b - 1][k] - series[b][k]);
    }
  }
  Outputs out;
  ordered_json& s = out.summary;
  s["pairs"] = series.front().size();
  s["max_decrease"] = max_decrease;
  if (series.size() >= 2) {
    double change = 0.0;
    const auto& a = series[series.size() - 2];
    const auto& b = series.back();
    for (std::size_t k = 0; k < a.size(); ++k) change = std::max(change, std::abs(b[k] - a[k]));
    s["last_interval_max_change"] = change;
  }
  s["final_fidelity"] = std::stod(fid.rows.back()[1]);
  out.tables.emplace_back("mutualinfo.csv", std::move(mi));
  out.tables.emplace_back("fidelity.csv", std::move(fid));
  return out;
}

Outputs run_count(const ExperimentConfig& cfg) {
  const std::uint64_t c = qite_measurement_count(cfg.count);
  Outputs out;
  out.summary["count"] = c;
  Table table{{"k", "t", "d", "odd_y", "trotter_order", "count"}, {}};
  table.rows.push_back({std::to_string(cfg.count.k), std::to_string(cfg.count.t),
                        std::to_string(cfg.count.d), cfg.count.odd_y ? "1" : "0",
                        std::to_string(cfg.count.trotter_order), std::to_string(c)});
  out.tables.emplace_back("count.csv", std::move(table));
  return out;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

int Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot read", path.string()));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(fmt::format("{}: empty table", path.string()));
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
    if (t.rows.back().size() != t.header.size()) {
      throw ConfigError(
          fmt::format("{}:{}: wrong number of cells", path.string(), t.rows.size() + 1));
    }
  }
  return t;
}

void write_csv(const fs::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
}

RunResult run_experiment(ExperimentConfig cfg, const RunOptions& options) {
  if (options.seed_override) {
    cfg.seed = *options.seed_override;
    cfg.qite.noise_seed = cfg.seed;
    cfg.qmetts.seed = cfg.seed;
  }
  const std::optional<Prepared> prepared = preflight(cfg, options.max_qubits);

  fs::path dir = options.out;
  if (dir.empty())
    dir = cfg.output.empty() ? fs::path("runs") / cfg.source.stem() : fs::path(cfg.output);
  fs::create_directories(dir);
  write_text(dir / "config.yaml", cfg.text);

  ordered_json manifest;
  manifest["tool"] = "qitekit";
  manifest["version"] = QITEKIT_VERSION;
  manifest["config_source"] = cfg.source.string();
  manifest["config"] = to_json(cfg);
  manifest["started_at"] = utc_now();
  manifest["status"] = "running";
  if (prepared) {
    manifest["initial_state"] = prepared->label;
    manifest["warnings"] = prepared->h.warnings;
  }
  write_json(dir / "manifest.json", manifest);

  Phases phases;
  try {
    Outputs out;
    switch (cfg.algorithm) {
      case Algorithm::kQite:
        out = run_qite(cfg, *prepared, phases);
        break;
      case Algorithm::kQlanczos:
        out = run_qlanczos(cfg, *prepared, phases);
        break;
      case Algorithm::kQmetts:
        out = run_qmetts(cfg, *prepared, phases);
        break;
      case Algorithm::kMutualInfo:
        out = run_mutualinfo(cfg, *prepared, phases);
        break;
      case Algorithm::kCount:
        out = run_count(cfg);
        break;
    }
    ordered_json files = ordered_json::array();
    for (const auto& [name, table] : out.tables) {
      write_csv(dir / name, table);
      files.push_back(name);
    }
    write_json(dir / "summary.json", out.summary);
    files.push_back("summary.json");
    manifest["files"] = files;
    manifest["timings"] = phases.json();
    manifest["finished_at"] = utc_now();
    manifest["status"] = "completed";
    write_json(dir / "manifest.json", manifest);
    return {dir, out.summary};
  } catch (const std::exception& e) {
    manifest["timings"] = phases.json();
    manifest["finished_at"] = utc_now();
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    write_json(dir / "manifest.json", manifest);
    throw;
  }
}

namespace {

struct LoadedRun {
  ExperimentConfig cfg;
  Table table;
  std::string series;
};

LoadedRun load_run(const fs::path& dir) {
  LoadedRun r;
  r.cfg = load_config(dir / "config.yaml");
  switch (r.cfg.algorithm) {
    case Algorithm::kQite:
      r.series = "qite.csv";
      break;
    case Algorithm::kQlanczos:
      r.series = "qlanczos.csv";
      break;
    case Algorithm::kQmetts:
      r.series = "qmetts.csv";
      break;
    case Algorithm::kMutualInfo:
      r.series = "mutualinfo.csv";
      break;
    case Algorithm::kCount:
      r.series = "count.csv";
      break;
  }
  r.table = read_csv(dir / r.series);
  return r;
}

double cell(const Table& t, std::size_t row, const std::string& col) {
  const int c = t.column(col);
  if (c < 0) throw ConfigError(fmt::format("series has no column '{}'", col));
  return std::stod(t.rows[row][static_cast<std::size_t>(c)]);
}

CompareReport against_oracle(const LoadedRun& run, const fs::path& dir, int max_qubits) {
  const auto p = preflight(run.cfg, max_qubits);
  if (p->h.n_qubits > kOracleQubits) {
    throw ResourceError(fmt::format("oracle comparison is limited to {} qubits", kOracleQubits));
  }
  const SpectralDecomposition spectrum = spectral_decomposition(p->h);
  const double e0 = spectrum.eigenvalues[0];
  CompareReport rep;
  const Table& t = run.table;
  auto exact_energy = [&](double beta) {
    return energy(exact_ite(p->state0, spectrum, beta), p->h);
  };

  switch (run.cfg.algorithm) {
    case Algorithm::kQite:
      rep.table.header = {"beta", "energy", "exact_ite_energy", "delta", "e0", "variational_ok"};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double beta = cell(t, r, "beta");
        const double e = cell(t, r, "energy");
        const double ex = exact_energy(beta);
        const bool ok = e >= e0 - 1e-9;
        rep.violations += !ok;
        rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(e - ex));
        rep.table.rows.push_back({format_number(beta), format_number(e), format_number(ex),
                                  format_number(e - ex), format_number(e0), ok ? "true" : "false"});
      }
      break;
    case Algorithm::kQlanczos:
      rep.table.header = {"beta",       "e_qite",         "e_qlanczos", "exact_ite_energy",
                          "delta_qite", "delta_qlanczos", "ql_le_qite", "variational_ok"};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double beta = cell(t, r, "beta");
        const double eq = cell(t, r, "e_qite");
        const double el = cell(t, r, "e_qlanczos");
        const double ex = exact_energy(beta);
        const bool le = el <= eq + 1e-9;
        const bool ok = el >= e0 - 1e-9 && eq >= e0 - 1e-9;
        rep.violations += !le + !ok;
        rep.max_abs_delta = std::max({rep.max_abs_delta, std::abs(eq - ex), std::abs(el - ex)});
        rep.table.rows.push_back({format_number(beta), format_number(eq), format_number(el),
                                  format_number(ex), format_number(eq - ex), format_number(el - ex),
                                  le ? "true" : "false", ok ? "true" : "false"});
      }
      break;
    case Algorithm::kQmetts: {
      std::vector<double> values;
      for (std::size_t r = 0; r < t.rows.size(); ++r) values.push_back(cell(t, r, "value"));
      const BlockEstimate est = block_error(values, run.cfg.qmetts.n_warmup);
      const double g = gibbs_average(p->h, observable_of(p->h), run.cfg.qmetts.beta);
      const bool ok = std::abs(est.mean - g) <= 3.0 * est.stderr_block;
      rep.violations += !ok;
      rep.max_abs_delta = std::abs(est.mean - g);
      rep.table.header = {"beta", "mean", "stderr_block", "gibbs", "delta", "within_3_stderr"};
      rep.table.rows.push_back({format_number(run.cfg.qmetts.beta), format_number(est.mean),
                                format_number(est.stderr_block), format_number(g),
                                format_number(est.mean - g), ok ? "true" : "false"});
      break;
    }
    default:
      throw ConfigError(fmt::format("{}: no oracle comparison for algorithm {}", dir.string(),
                                    to_string(run.cfg.algorithm)));
  }
  return rep;
}

bool is_key_column(const std::string& c) {
  return c == "sweep" || c == "beta" || c == "sample" || c == "i" || c == "j";
}

CompareReport between_runs(const LoadedRun& a, const LoadedRun& b, const fs::path& da,
                           const fs::path& db) {
  if (a.cfg.algorithm != b.cfg.algorithm) {
    throw ConfigError(fmt::format("{} and {} ran different algorithms", da.string(), db.string()));
  }
  const ordered_json ja = to_json(a.cfg);
  const ordered_json jb = to_json(b.cfg);
  if (ja.value("model", ordered_json()) != jb.value("model", ordered_json())) {
    throw ConfigError(fmt::format("{} and {} use different models", da.string(), db.string()));
  }
  if (a.table.header != b.table.header || a.table.rows.size() != b.table.rows.size()) {
    throw ConfigError(fmt::format("{} and {} have incompatible series", da.string(), db.string()));
  }
  CompareReport rep;
  std::vector<std::size_t> keys;
  std::vector<std::size_t> values;
  for (std::size_t c = 0; c < a.table.header.size(); ++c) {
    const std::string& name = a.table.header[c];
    if (is_key_column(name)) {
      keys.push_back(c);
      rep.table.header.push_back(name);
    } else if (name != "label") {
      values.push_back(c);
    }
  }
  for (std::size_t c : values) {
    const std::string& name = a.table.header[c];
    rep.table.header.insert(rep.table.header.end(), {name + "_a", name + "_b", "delta_" + name});
  }
  for (std::size_t r = 0; r < a.table.rows.size(); ++r) {
    std::vector<std::string> row;
    for (std::size_t c : keys) {
      if (a.table.rows[r][c] != b.table.rows[r][c]) {
        throw ConfigError(fmt::format("row {} differs in '{}'", r + 1, a.table.header[c]));
      }
      row.push_back(a.table.rows[r][c]);
    }
    for (std::size_t c : values) {
      const double va = std::stod(a.table.rows[r][c]);
      const double vb = std::stod(b.table.rows[r][c]);
      rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(va - vb));
      row.insert(row.end(), {a.table.rows[r][c], b.table.rows[r][c], format_number(va - vb)});
    }
    rep.table.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace

CompareReport compare_runs(const std::vector<fs::path>& dirs, int max_qubits) {
  if (dirs.empty() || dirs.size() > 2)
    throw ConfigError("compare takes one or two run directories");
  const LoadedRun a = load_run(dirs[0]);
  if (dirs.size() == 1) return against_oracle(a, dirs[0], max_qubits);
  return between_runs(a, load_run(dirs[1]), dirs[0], dirs[1]);
}

}  // namespace qitekit::cli
