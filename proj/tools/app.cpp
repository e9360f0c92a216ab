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

#include "app.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "qitekit/errors.hpp"
#include "runner.hpp"

namespace qitekit::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kThreadsVar = "QITEKIT_THREADS";

int exit_code_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const ParseError&) {
    return kExitConfig;
  } catch (const ResourceError&) {
    return kExitResource;
  } catch (const NumericalError&) {
    return kExitNumerical;
  } catch (...) {
    return kExitInternal;
  }
}

std::string message_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

int report(const std::exception_ptr& e) {
  std::cerr << "error: " << message_of(e) << '\n';
  return exit_code_of(e);
}

unsigned thread_count() {
  const char* v = std::getenv(kThreadsVar);
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) {
    throw ConfigError(fmt::format("{} must be a positive integer, got '{}'", kThreadsVar, v));
  }
  return static_cast<unsigned>(n);
}

struct RunArgs {
  std::vector<std::string> configs;
  std::string out;
  std::optional<std::uint64_t> seed;
  int max_qubits = Limits{}.max_qubits;
};

int do_run(const RunArgs& args) {
  std::vector<ExperimentConfig> cfgs;
  std::vector<RunOptions> opts;
  try {
    for (const auto& path : args.configs) cfgs.push_back(load_config(path));
    std::map<std::string, std::string> seen;
    for (const auto& cfg : cfgs) {
      RunOptions o;
      o.seed_override = args.seed;
      o.max_qubits = args.max_qubits;
      if (!args.out.empty()) {
        o.out = cfgs.size() == 1 ? fs::path(args.out) : fs::path(args.out) / cfg.source.stem();
      } else {
        o.out = cfg.output.empty() ? fs::path("runs") / cfg.source.stem() : fs::path(cfg.output);
      }
      const std::string key = fs::weakly_canonical(o.out).string();
      if (auto [it, fresh] = seen.emplace(key, cfg.source.string()); !fresh) {
        throw ConfigError(fmt::format("{} and {} write to the same directory {}", it->second,
                                      cfg.source.string(), o.out.string()));
      }
      opts.push_back(std::move(o));
    }
  } catch (...) {
    return report(std::current_exception());
  }

  unsigned threads = 1;
  try {
    threads = std::min<unsigned>(thread_count(), static_cast<unsigned>(cfgs.size()));
  } catch (...) {
    return report(std::current_exception());
  }

  std::vector<int> codes(cfgs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        const RunResult r = run_experiment(cfgs[i], opts[i]);
        std::lock_guard lock(io);
        std::cout << r.dir.string() << '\n';
      } catch (...) {
        const auto e = std::current_exception();
        std::lock_guard lock(io);
        std::cerr << cfgs[i].source.string() << ": ";
        codes[i] = report(e);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const auto bad = std::find_if(codes.begin(), codes.end(), [](int c) { return c != kExitOk; });
  return bad == codes.end() ? kExitOk : *bad;
}

int do_compare(const std::vector<std::string>& dirs, const std::string& out, int max_qubits) {
  try {
    std::vector<fs::path> paths(dirs.begin(), dirs.end());
    const CompareReport rep = compare_runs(paths, max_qubits);
    if (out.empty()) {
      for (std::size_t i = 0; i < rep.table.header.size(); ++i) {
        std::cout << (i ? "," : "") << rep.table.header[i];
      }
      std::cout << '\n';
      for (const auto& row : rep.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
        std::cout << '\n';
      }
    } else {
      write_csv(out, rep.table);
    }
    std::cerr << fmt::format("max |delta| = {}, violations = {}\n",
                             format_number(rep.max_abs_delta), rep.violations);
    return kExitOk;
  } catch (...) {
    return report(std::current_exception());
  }
}

int do_count(const CostQuery& q) {
  try {
    std::cout << qite_measurement_count(q) << '\n';
    return kExitOk;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (...) {
    return report(std::current_exception());
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Quantum imaginary-time evolution toolkit"};
  app.set_version_flag("--version", QITEKIT_VERSION);
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run one or more experiment configs");
  run->add_option("--config", run_args.configs, "Experiment config (YAML); repeat for a batch")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_args.out, "Run directory (a parent directory for batches)");
  run->add_option("--seed-override", run_args.seed, "Replace the config seed");
  run->add_option("--max-qubits", run_args.max_qubits, "Refuse models wider than this")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> dirs;
  std::string compare_out;
  int compare_max_qubits = Limits{}.max_qubits;
  CLI::App* compare =
      app.add_subcommand("compare", "Compare a run against the dense oracle or another run");
  compare->add_option("dirs", dirs, "One or two run directories")->required()->expected(1, 2);
  compare->add_option("--out", compare_out, "Write the report CSV here instead of stdout");
  compare->add_option("--max-qubits", compare_max_qubits, "Refuse models wider than this")
      ->check(CLI::PositiveNumber);

  CostQuery q;
  CLI::App* count =
      app.add_subcommand("count", "QITE measurement count for K terms, T steps, domain D");
  count->add_option("--k", q.k, "Number of local terms")->required();
  count->add_option("--t", q.t, "Number of Trotter steps")->required();
  count->add_option("--d", q.d, "Domain size")->required();
  count->add_flag("--odd-y", q.odd_y, "Count only odd-Y strings");
  count->add_option("--trotter-order", q.trotter_order, "1 or 2")->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*run) return do_run(run_args);
  if (*compare) return do_compare(dirs, compare_out, compare_max_qubits);
  return do_count(q);
}

}  // namespace qitekit::cli
