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

#include "config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qitekit/errors.hpp"

namespace qitekit::cli {

namespace {

std::string where(const std::string& src, const YAML::Mark& m) {
  if (m.is_null()) return src;
  return fmt::format("{}:{}:{}", src, m.line + 1, m.column + 1);
}

// View of one YAML mapping that tracks which keys were read, so unknown
// keys can be reported once parsing of the section is done.
class Section {
 public:
  Section(YAML::Node node, std::string name, const std::string& src)
      : node_(std::move(node)), name_(std::move(name)), src_(src) {
    if (!node_.IsMap()) fail(node_, fmt::format("'{}' must be a mapping", name_));
  }

  const YAML::Node& node() const { return node_; }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    YAML::Node v = raw(key);
    if (!v) return std::nullopt;
    return convert<T>(v, key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    return get<T>(key).value_or(fallback);
  }

  template <typename T>
  T require(const std::string& key) {
    auto v = get<T>(key);
    if (!v) fail(node_, fmt::format("missing required key '{}' in '{}'", key, name_));
    return *v;
  }

  std::optional<Section> section(const std::string& key) {
    YAML::Node v = raw(key);
    if (!v) return std::nullopt;
    return Section(v, key, src_);
  }

  /// Rejects every key that was not read.
  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.contains(key)) {
        fail(kv.first, fmt::format("unknown key '{}' in '{}'", key, name_));
      }
    }
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(fmt::format("{}: {}", where(src_, at.Mark()), msg));
  }

  template <typename T>
  T convert(const YAML::Node& v, const std::string& key) const {
    const std::string what = fmt::format("{}.{}", name_, key);
    if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.IsSequence()) fail(v, fmt::format("'{}' must be a list of numbers", what));
      std::vector<double> out;
      for (const auto& e : v) out.push_back(convert<double>(e, key));
      return out;
    } else {
      if (!v.IsScalar()) fail(v, fmt::format("'{}' must be a scalar", what));
      try {
        if constexpr (std::is_same_v<T, bool>) {
          const auto s = v.as<std::string>();
          if (s != "true" && s != "false") fail(v, fmt::format("'{}' must be true or false", what));
          return s == "true";
        } else if constexpr (std::is_integral_v<T>) {
          return v.as<T>();
        } else {
          const double d = v.as<double>();
          if (!std::isfinite(d)) fail(v, fmt::format("'{}' must be finite", what));
          return d;
        }
      } catch (const YAML::BadConversion&) {
        const char* kind = std::is_same_v<T, std::string> ? "a string"
                           : std::is_integral_v<T>        ? "an integer"
                                                          : "a number";
        fail(v, fmt::format("'{}' must be {}", what, kind));
      }
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
  std::string src_;
  std::set<std::string> used_;
};

template <>
std::string Section::convert<std::string>(const YAML::Node& v, const std::string& key) const {
  if (!v.IsScalar()) fail(v, fmt::format("'{}.{}' must be a string", name_, key));
  return v.as<std::string>();
}

Algorithm algorithm_from_string(const std::string& s, Section& top, const YAML::Node& at) {
  if (s == "qite") return Algorithm::kQite;
  if (s == "qlanczos") return Algorithm::kQlanczos;
  if (s == "qmetts") return Algorithm::kQmetts;
  if (s == "mutualinfo") return Algorithm::kMutualInfo;
  if (s == "count") return Algorithm::kCount;
  top.fail(at, fmt::format("unknown algorithm '{}' (expected qite, qlanczos, qmetts, "
                           "mutualinfo or count)",
                           s));
}

template <typename F>
auto checked(Section& s, const YAML::Node& at, F&& f) {
  try {
    return f();
  } catch (const qitekit::Error& e) {
    s.fail(at, e.what());
  }
}

ModelSpec parse_model(Section s) {
  ModelSpec m;
  m.name = s.require<std::string>("name");
  auto num = [&](const char* key) { m.params[key] = s.require<double>(key); };
  auto num_or = [&](const char* key, double v) { m.params[key] = s.get_or<double>(key, v); };
  auto count = [&](const char* key) {
    const auto v = s.require<int>(key);
    m.params[key] = v;
  };
  if (m.name == "one_qubit_field") {
    num("alpha");
    num("beta");
  } else if (m.name == "heisenberg_1d") {
    count("n");
    num_or("J", 1.0);
    num_or("B", 0.0);
  } else if (m.name == "heisenberg_long_range") {
    count("n");
  } else if (m.name == "tfi_1d") {
    count("n");
    num_or("J", 1.0);
    num("h");
  } else if (m.name == "hubbard_1d") {
    count("n_sites");
    num("U");
    num_or("mu", 0.0);
  } else if (m.name == "h2_bk") {
    if (s.has("g") == s.has("table")) {
      s.fail(s.raw("name"), "h2_bk needs exactly one of 'g' or 'table'");
    }
    if (auto g = s.get<std::vector<double>>("g")) {
      if (g->size() != 6) s.fail(s.raw("g"), "'model.g' must list 6 coefficients");
      m.g.emplace();
      std::copy(g->begin(), g->end(), m.g->begin());
    } else {
      m.h2_table = s.require<std::string>("table");
      m.bond_length = s.require<double>("bond_length");
    }
  } else if (m.name == "maxcut") {
    count("n");
    YAML::Node edges = s.raw("edges");
    if (!edges || !edges.IsSequence()) {
      s.fail(edges ? edges : s.raw("name"), "'model.edges' must be a list of [i, j] pairs");
    }
    for (const auto& e : edges) {
      if (!e.IsSequence() || e.size() != 2) s.fail(e, "each edge must be a pair [i, j]");
      m.edges.emplace_back(s.convert<int>(e[0], "edges"), s.convert<int>(e[1], "edges"));
    }
  } else {
    s.fail(s.raw("name"),
           fmt::format("unknown model '{}' (expected one_qubit_field, heisenberg_1d, "
                       "heisenberg_long_range, tfi_1d, hubbard_1d, h2_bk or maxcut)",
                       m.name));
  }
  s.finish();
  return m;
}

// Fills the propagation fields shared by qite, qlanczos and qmetts runs.
void parse_qite(Section& s, QiteConfig& q, bool needs_length) {
  q.dtau = s.get_or<double>("dtau", q.dtau);
  const bool has_steps = s.has("n_steps");
  const bool has_beta = s.has("beta");
  if (needs_length) {
    if (has_steps == has_beta)
      s.fail(s.node(), "give exactly one of 'qite.n_steps' or 'qite.beta'");
    if (has_steps) {
      q.n_steps = s.require<int>("n_steps");
    } else {
      const double beta = s.require<double>("beta");
      const double steps = beta / q.dtau;
      if (std::abs(steps - std::round(steps)) > 1e-9) {
        s.fail(s.raw("beta"), "'qite.beta' must be an integer multiple of 'qite.dtau'");
      }
      q.n_steps = static_cast<int>(std::round(steps));
    }
  } else if (has_steps || has_beta) {
    s.fail(s.raw(has_steps ? "n_steps" : "beta"),
           "qmetts sets the propagation length from 'qmetts.beta'");
  }
  q.domain_size = s.get_or<int>("domain_size", q.domain_size);
  q.delta = s.get_or<double>("delta", q.delta);
  if (auto p = s.get<std::string>("pool")) {
    q.pool_kind = checked(s, s.raw("pool"), [&] { return pool_kind_from_string(*p); });
  }
  q.trotter_order = s.get_or<int>("trotter_order", q.trotter_order);
  if (auto b = s.get<std::string>("b_mode")) {
    q.b_mode = checked(s, s.raw("b_mode"), [&] { return b_mode_from_string(*b); });
  }
  q.pinv_tol = s.get_or<double>("pinv_tol", q.pinv_tol);
  q.include_inv_sqrt_c = s.get_or<bool>("include_inv_sqrt_c", q.include_inv_sqrt_c);
  q.noise_sigma = s.get_or<double>("noise_sigma", q.noise_sigma);
  q.dense_pool_limit = s.get_or<int>("dense_pool_limit", q.dense_pool_limit);
  q.max_domain_qubits = s.get_or<int>("max_domain_qubits", q.max_domain_qubits);
  checked(s, s.node(), [&] {
    q.validate();
    return 0;
  });
}

void reject_section(Section& top, const char* key, Algorithm a) {
  if (top.has(key)) {
    top.fail(top.raw(key),
             fmt::format("section '{}' is not used by algorithm {}", key, to_string(a)));
  }
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kQite:
      return "qite";
    case Algorithm::kQlanczos:
      return "qlanczos";
    case Algorithm::kQmetts:
      return "qmetts";
    case Algorithm::kMutualInfo:
      return "mutualinfo";
    case Algorithm::kCount:
      return "count";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text, const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}: {}", where(source_name, e.mark), e.msg));
  }
  if (!root || root.IsNull())
    throw ConfigError(fmt::format("{}:1:1: config is empty", source_name));

  ExperimentConfig cfg;
  cfg.source = source_name;
  cfg.text = text;
  Section top(root, "config", source_name);
  const YAML::Node algo_node = top.raw("algorithm");
  if (!algo_node) top.fail(root, "missing required key 'algorithm'");
  cfg.algorithm =
      algorithm_from_string(top.convert<std::string>(algo_node, "algorithm"), top, algo_node);
  cfg.seed = top.get_or<std::uint64_t>("seed", 0);
  cfg.output = top.get_or<std::string>("output", "");

  if (cfg.algorithm == Algorithm::kCount) {
    for (const char* key : {"model", "initial_state", "qite", "qlanczos", "qmetts", "mutualinfo"}) {
      reject_section(top, key, cfg.algorithm);
    }
    auto section = top.section("count");
    if (!section) top.fail(root, "missing required section 'count'");
    Section& s = *section;
    cfg.count.k = s.require<int>("k");
    cfg.count.t = s.require<int>("t");
    cfg.count.d = s.require<int>("d");
    cfg.count.odd_y = s.get_or<bool>("odd_y", false);
    cfg.count.trotter_order = s.get_or<int>("trotter_order", 2);
    s.finish();
    checked(s, s.node(), [&] { return qite_measurement_count(cfg.count); });
    top.finish();
    return cfg;
  }
  reject_section(top, "count", cfg.algorithm);

  auto model = top.section("model");
  if (!model) top.fail(root, "missing required section 'model'");
  cfg.model = parse_model(*model);
  cfg.initial_state = top.get_or<std::string>("initial_state", "");

  switch (cfg.algorithm) {
    case Algorithm::kQite:
    case Algorithm::kQlanczos: {
      auto q = top.section("qite");
      if (!q) top.fail(root, "missing required section 'qite'");
      parse_qite(*q, cfg.qite, true);
      cfg.report_fidelity = q->get_or<bool>("report_fidelity", true);
      q->finish();
      cfg.qite.noise_seed = cfg.seed;
      if (cfg.algorithm == Algorithm::kQlanczos) {
        if (auto s = top.section("qlanczos")) {
          cfg.qlanczos.s = s->get_or<double>("s", cfg.qlanczos.s);
          cfg.qlanczos.eps = s->get_or<double>("eps", cfg.qlanczos.eps);
          const auto parity = s->get_or<std::string>("parity", "even");
          if (parity != "even" && parity != "odd")
            s->fail(s->raw("parity"), "'qlanczos.parity' must be even or odd");
          cfg.qlanczos.parity = parity == "even" ? Parity::kEven : Parity::kOdd;
          cfg.ledger_noise = s->get_or<double>("ledger_noise", 0.0);
          if (!(cfg.qlanczos.s > 0.0 && cfg.qlanczos.s < 1.0))
            s->fail(s->raw("s"), "'qlanczos.s' must lie in (0, 1)");
          if (!(cfg.qlanczos.eps > 0.0)) s->fail(s->raw("eps"), "'qlanczos.eps' must be positive");
          if (!(cfg.ledger_noise >= 0.0))
            s->fail(s->raw("ledger_noise"), "'qlanczos.ledger_noise' must be non-negative");
          s->finish();
        }
      }
      for (const char* key : {"qmetts", "mutualinfo"}) reject_section(top, key, cfg.algorithm);
      if (cfg.algorithm == Algorithm::kQite) reject_section(top, "qlanczos", cfg.algorithm);
      break;
    }
    case Algorithm::kQmetts: {
      cfg.qmetts.qite = MettsConfig::default_qite();
      if (auto q = top.section("qite")) {
        parse_qite(*q, cfg.qmetts.qite, false);
        q->finish();
      }
      auto s = top.section("qmetts");
      if (!s) top.fail(root, "missing required section 'qmetts'");
      cfg.qmetts.beta = s->require<double>("beta");
      cfg.qmetts.n_samples = s->get_or<int>("n_samples", cfg.qmetts.n_samples);
      cfg.qmetts.n_warmup = s->get_or<int>("n_warmup", cfg.qmetts.n_warmup);
      if (auto sch = s->get<std::string>("schedule")) {
        cfg.qmetts.schedule =
            checked(*s, s->raw("schedule"), [&] { return basis_schedule_from_string(*sch); });
      }
      cfg.qmetts.seed = cfg.seed;
      checked(*s, s->node(), [&] {
        cfg.qmetts.validate();
        return 0;
      });
      s->finish();
      for (const char* key : {"qlanczos", "mutualinfo", "initial_state"}) {
        reject_section(top, key, cfg.algorithm);
      }
      break;
    }
    case Algorithm::kMutualInfo: {
      auto s = top.section("mutualinfo");
      if (!s) top.fail(root, "missing required section 'mutualinfo'");
      cfg.mi_betas = s->require<std::vector<double>>("betas");
      if (cfg.mi_betas.empty()) s->fail(s->raw("betas"), "'mutualinfo.betas' is empty");
      for (std::size_t i = 0; i < cfg.mi_betas.size(); ++i) {
        if (cfg.mi_betas[i] < 0.0 || (i > 0 && cfg.mi_betas[i] <= cfg.mi_betas[i - 1])) {
          s->fail(s->raw("betas"), "'mutualinfo.betas' must be non-negative and increasing");
        }
      }
      s->finish();
      for (const char* key : {"qite", "qlanczos", "qmetts"})
        reject_section(top, key, cfg.algorithm);
      break;
    }
    case Algorithm::kCount:
      break;
  }
  top.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot read config file", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["seed"] = cfg.seed;
  if (cfg.algorithm == Algorithm::kCount) {
    j["count"] = {{"k", cfg.count.k},
                  {"t", cfg.count.t},
                  {"d", cfg.count.d},
                  {"odd_y", cfg.count.odd_y},
                  {"trotter_order", cfg.count.trotter_order}};
    return j;
  }
  const ModelSpec& m = *cfg.model;
  ordered_json model;
  model["name"] = m.name;
  for (const auto& [k, v] : m.params) model[k] = v;
  if (!m.edges.empty()) {
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : m.edges) edges.push_back({a, b});
    model["edges"] = edges;
  }
  if (m.g) model["g"] = *m.g;
  if (!m.h2_table.empty()) {
    model["table"] = m.h2_table;
    model["bond_length"] = m.bond_length;
  }
  j["model"] = model;
  j["initial_state"] = cfg.initial_state;
  auto qite_json = [](const QiteConfig& q, bool with_length) {
    ordered_json o;
    o["dtau"] = q.dtau;
    if (with_length) o["n_steps"] = q.n_steps;
    o["domain_size"] = q.domain_size;
    o["delta"] = q.delta;
    o["pool"] = to_string(q.pool_kind);
    o["trotter_order"] = q.trotter_order;
    o["b_mode"] = to_string(q.b_mode);
    o["pinv_tol"] = q.pinv_tol;
    o["include_inv_sqrt_c"] = q.include_inv_sqrt_c;
    o["noise_sigma"] = q.noise_sigma;
    o["dense_pool_limit"] = q.dense_pool_limit;
    o["max_domain_qubits"] = q.max_domain_qubits;
    return o;
  };
  switch (cfg.algorithm) {
    case Algorithm::kQite:
    case Algorithm::kQlanczos:
      j["qite"] = qite_json(cfg.qite, true);
      j["qite"]["report_fidelity"] = cfg.report_fidelity;
      if (cfg.algorithm == Algorithm::kQlanczos) {
        j["qlanczos"] = {{"s", cfg.qlanczos.s},
                         {"eps", cfg.qlanczos.eps},
                         {"parity", cfg.qlanczos.parity == Parity::kEven ? "even" : "odd"},
                         {"ledger_noise", cfg.ledger_noise}};
      }
      break;
    case Algorithm::kQmetts:
      j["qite"] = qite_json(cfg.qmetts.qite, false);
      j["qmetts"] = {{"beta", cfg.qmetts.beta},
                     {"n_samples", cfg.qmetts.n_samples},
                     {"n_warmup", cfg.qmetts.n_warmup},
                     {"schedule", to_string(cfg.qmetts.schedule)}};
      break;
    case Algorithm::kMutualInfo:
      j["mutualinfo"] = {{"betas", cfg.mi_betas}};
      break;
    case Algorithm::kCount:
      break;
  }
  return j;
}

Hamiltonian build_model(const ModelSpec& m, const std::filesystem::path& base_dir) {
  auto p = [&](const char* key) { return m.params.at(key); };
  auto n = [&](const char* key) { return static_cast<int>(m.params.at(key)); };
  if (m.name == "one_qubit_field") return one_qubit_field(p("alpha"), p("beta"));
  if (m.name == "heisenberg_1d") return heisenberg_1d(n("n"), p("J"), p("B"));
  if (m.name == "heisenberg_long_range") return heisenberg_long_range(n("n"));
  if (m.name == "tfi_1d") return tfi_1d(n("n"), p("J"), p("h"));
  if (m.name == "hubbard_1d") return hubbard_1d_jw(n("n_sites"), p("U"), p("mu"));
  if (m.name == "maxcut") return maxcut(m.edges, n("n"));
  if (m.name == "h2_bk") {
    if (m.g) return h2_bk(*m.g);
    std::filesystem::path table = m.h2_table;
    if (table.is_relative()) table = base_dir / table;
    return h2_bk(find_h2_geometry(load_h2_table(table), m.bond_length).g);
  }
  throw DomainError(fmt::format("unknown model '{}'", m.name));
}

std::string default_initial_state(const Hamiltonian& h) {
  return std::string(static_cast<std::size_t>(h.n_qubits), h.model == "maxcut" ? '+' : '0');
}

}  // namespace qitekit::cli
