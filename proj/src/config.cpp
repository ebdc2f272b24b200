#include "wpcn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_ENABLE_FORMATTERS 0
#include <toml.hpp>

#include "wpcn/error.hpp"
#include "wpcn/sum_solvers.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

namespace {

int line_of(const toml::node& n) { return static_cast<int>(n.source().begin.line); }

void reject_unknown(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, node] : t) {
    if (!allowed.count(std::string(key.str()))) {
      throw ConfigError("unknown key '" + std::string(key.str()) + "' in " + where, line_of(node));
    }
  }
}

std::optional<double> number(const toml::table& t, std::string_view key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_number()) throw ConfigError(where + "." + std::string(key) + " must be a number", line_of(*n));
  const double v = n->value<double>().value();
  if (!std::isfinite(v)) throw ConfigError(where + "." + std::string(key) + " must be finite", line_of(*n));
  return v;
}

double required_number(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = number(t, key, where);
  if (!v) throw ConfigError("missing required key " + where + "." + std::string(key), line_of(t));
  return *v;
}

void check_range(bool ok, const toml::table& t, std::string_view key, const std::string& where,
                 const std::string& rule) {
  if (ok) return;
  const toml::node* n = t.get(key);
  throw ConfigError(where + "." + std::string(key) + " out of range: " + rule, n ? line_of(*n) : line_of(t));
}

std::optional<std::string> string_value(const toml::table& t, std::string_view key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_string()) throw ConfigError(where + "." + std::string(key) + " must be a string", line_of(*n));
  return n->value<std::string>().value();
}

std::optional<std::int64_t> integer(const toml::table& t, std::string_view key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_integer()) throw ConfigError(where + "." + std::string(key) + " must be an integer", line_of(*n));
  return n->value<std::int64_t>().value();
}

// ---- overrides ----------------------------------------------------------

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

toml::table parse_override_value(const std::string& text) {
  try {
    return toml::parse("v = " + text);
  } catch (const toml::parse_error&) {
    // Bare words are taken as strings: --override users.0.type=legacy
    toml::table t;
    t.insert("v", text);
    return t;
  }
}

void apply_override(toml::table& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + spec + "' is not key=value");
  const std::vector<std::string> path = split(std::string_view(spec).substr(0, eq), '.');
  toml::table value = parse_override_value(spec.substr(eq + 1));
  toml::node* cur = &root;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::string& seg = path[i];
    if (seg.empty()) throw ConfigError("override '" + spec + "' has an empty key segment");
    const bool last = i + 1 == path.size();
    if (auto* tbl = cur->as_table()) {
      if (last) {
        tbl->insert_or_assign(seg, *value.get("v"));
        return;
      }
      if (!tbl->contains(seg)) tbl->insert(seg, toml::table{});
      cur = tbl->get(seg);
    } else if (auto* arr = cur->as_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(seg, &used);
        if (used != seg.size()) throw std::invalid_argument(seg);
      } catch (const std::exception&) {
        throw ConfigError("override '" + spec + "': '" + seg + "' is not an array index");
      }
      if (idx >= arr->size()) throw ConfigError("override '" + spec + "': index " + seg + " out of range");
      if (last) {
        arr->replace(arr->begin() + static_cast<std::ptrdiff_t>(idx), *value.get("v"));
        return;
      }
      cur = arr->get(idx);
    } else {
      throw ConfigError("override '" + spec + "': '" + seg + "' is not inside a table or array");
    }
  }
}

// ---- sections -----------------------------------------------------------

struct RawUser {
  UserParams params;
  std::optional<NodeType> type;
  std::optional<double> h, g, alpha, harvest_rate;
  bool has_distance = false;
};

void read_network(const toml::table& net, Config& cfg, std::optional<double>& e_max_value, bool& e_max_matched) {
  const std::string w = "network";
  reject_unknown(net,
                 {"p_b_dbm", "sigma2_dbm_hz", "bandwidth_hz", "gamma_db", "e_max_joules", "beta", "pathloss_const",
                  "fading", "reciprocal"},
                 w);
  Scenario& sc = cfg.scenario;
  sc.p_b_dbm = required_number(net, "p_b_dbm", w);
  sc.sigma2_dbm_hz = required_number(net, "sigma2_dbm_hz", w);
  sc.bandwidth_hz = required_number(net, "bandwidth_hz", w);
  check_range(sc.bandwidth_hz > 0.0, net, "bandwidth_hz", w, "must be > 0");
  sc.gamma_db = required_number(net, "gamma_db", w);
  if (auto b = number(net, "beta", w)) {
    check_range(*b > 0.0, net, "beta", w, "must be > 0");
    sc.channel.beta = *b;
  }
  if (auto k = number(net, "pathloss_const", w)) {
    check_range(*k > 0.0, net, "pathloss_const", w, "must be > 0");
    sc.channel.pathloss_const = *k;
  }
  if (const toml::node* n = net.get("reciprocal")) {
    if (!n->is_boolean()) throw ConfigError("network.reciprocal must be a boolean", line_of(*n));
    sc.channel.reciprocal = n->value<bool>().value();
  }
  if (auto f = string_value(net, "fading", w)) {
    if (*f == "none") {
      sc.channel.pinned_fading = 1.0;
    } else if (*f != "rayleigh") {
      throw ConfigError("network.fading must be \"rayleigh\" or \"none\"", line_of(*net.get("fading")));
    }
  }
  if (const toml::node* n = net.get("e_max_joules")) {
    if (n->is_string()) {
      if (n->value<std::string>().value() != "matched") {
        throw ConfigError("network.e_max_joules must be a number or \"matched\"", line_of(*n));
      }
      e_max_matched = true;
    } else {
      e_max_value = number(net, "e_max_joules", w);
      check_range(*e_max_value > 0.0, net, "e_max_joules", w, "must be > 0");
    }
  }
}

RawUser read_user(const toml::table& u, std::size_t index) {
  const std::string w = "users[" + std::to_string(index) + "]";
  reject_unknown(u, {"eta", "e_budget_joules", "d_meters", "type", "h", "g", "alpha", "harvest_rate"}, w);
  RawUser r;
  r.params.eta = required_number(u, "eta", w);
  check_range(r.params.eta > 0.0 && r.params.eta < 1.0, u, "eta", w, "must lie in (0, 1)");
  r.params.e_budget = number(u, "e_budget_joules", w).value_or(0.0);
  check_range(r.params.e_budget >= 0.0, u, "e_budget_joules", w, "must be >= 0");
  if (auto d = number(u, "d_meters", w)) {
    check_range(*d > 0.0, u, "d_meters", w, "must be > 0");
    r.params.distance = *d;
    r.has_distance = true;
  }
  if (auto t = string_value(u, "type", w)) {
    if (*t == "harvest") {
      r.type = NodeType::Harvest;
    } else if (*t == "legacy") {
      r.type = NodeType::Legacy;
    } else {
      throw ConfigError(w + ".type must be \"harvest\" or \"legacy\"", line_of(*u.get("type")));
    }
  }
  for (auto [key, slot] : {std::pair{"h", &r.h}, std::pair{"g", &r.g}, std::pair{"alpha", &r.alpha},
                           std::pair{"harvest_rate", &r.harvest_rate}}) {
    *slot = number(u, key, w);
    if (*slot) check_range(**slot >= 0.0, u, key, w, "must be >= 0");
  }
  const bool gains = r.h || r.g;
  const bool coeffs = r.alpha || r.harvest_rate;
  if (gains && !(r.h && r.g)) throw ConfigError(w + ": h and g must be given together", line_of(u));
  if (coeffs && !(r.alpha && r.harvest_rate)) {
    throw ConfigError(w + ": alpha and harvest_rate must be given together", line_of(u));
  }
  if (static_cast<int>(r.has_distance) + static_cast<int>(gains) + static_cast<int>(coeffs) != 1) {
    throw ConfigError(w + ": give exactly one of d_meters, h+g, alpha+harvest_rate", line_of(u));
  }
  return r;
}

void read_users(const toml::array& users, Config& cfg) {
  if (users.empty()) throw ConfigError("[[users]] must list at least one user");
  std::vector<RawUser> raw;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const toml::table* t = users.get(i)->as_table();
    if (!t) throw ConfigError("users[" + std::to_string(i) + "] must be a table", line_of(*users.get(i)));
    raw.push_back(read_user(*t, i));
  }
  const auto mode = [](const RawUser& r) { return r.has_distance ? 0 : (r.h ? 1 : 2); };
  std::size_t typed = 0;
  for (const auto& r : raw) {
    if (mode(r) != mode(raw[0])) {
      throw ConfigError("all users must use the same channel description (d_meters, h+g or alpha+harvest_rate)",
                        line_of(users));
    }
    typed += r.type.has_value();
  }
  if (typed != 0 && typed != raw.size()) throw ConfigError("give a type for every user or for none", line_of(users));

  Scenario& sc = cfg.scenario;
  for (const auto& r : raw) {
    sc.users.push_back(r.params);
    if (r.type) sc.types.push_back(*r.type);
  }
  if (mode(raw[0]) == 0) return;
  ChannelRealization ch;
  if (mode(raw[0]) == 1) {
    for (const auto& r : raw) {
      ch.h.push_back(*r.h);
      ch.g.push_back(*r.g);
    }
  } else {
    // Back out gains so the built instance reproduces the given coefficients.
    cfg.coefficient_users = true;
    const double p_b = dbm_to_watts(sc.p_b_dbm);
    const double noise = db_to_linear(sc.gamma_db) * noise_power(sc.sigma2_dbm_hz, sc.bandwidth_hz);
    for (const auto& r : raw) {
      ch.h.push_back(*r.harvest_rate / (r.params.eta * p_b));
      ch.g.push_back(*r.alpha * noise);
    }
  }
  sc.fixed_channels = std::move(ch);
}

SweepSection read_sweep(const toml::table& s) {
  const std::string w = "sweep";
  reject_unknown(s, {"param", "values", "realizations", "seed", "problems"}, w);
  SweepSection out;
  const auto name = string_value(s, "param", w);
  if (!name) throw ConfigError("missing required key sweep.param", line_of(s));
  const auto param = parse_sweep_param(*name);
  if (!param || *param == SweepParam::GainRatio) {
    throw ConfigError("sweep.param must be one of beta, p_b_dbm, e_max, e_budget, d1, mix", line_of(*s.get("param")));
  }
  out.param = *param;
  const toml::node* values = s.get("values");
  if (!values) throw ConfigError("missing required key sweep.values", line_of(s));
  const toml::array* arr = values->as_array();
  if (!arr || arr->empty()) throw ConfigError("sweep.values must be a non-empty array of numbers", line_of(*values));
  for (const auto& v : *arr) {
    if (!v.is_number()) throw ConfigError("sweep.values must hold numbers only", line_of(v));
    out.values.push_back(v.value<double>().value());
  }
  if (auto r = integer(s, "realizations", w)) {
    check_range(*r >= 1, s, "realizations", w, "must be >= 1");
    out.realizations = static_cast<std::size_t>(*r);
  }
  if (auto seed = integer(s, "seed", w)) {
    check_range(*seed >= 0, s, "seed", w, "must be >= 0");
    out.seed = static_cast<std::uint64_t>(*seed);
  }
  if (const toml::node* p = s.get("problems")) {
    const toml::array* list = p->as_array();
    if (!list || list->empty()) throw ConfigError("sweep.problems must be a non-empty array of strings", line_of(*p));
    for (const auto& item : *list) {
      const auto text = item.value<std::string>();
      const auto kind = text ? parse_problem_kind(*text) : std::nullopt;
      if (!kind) throw ConfigError("sweep.problems: unknown problem entry", line_of(item));
      out.problems.push_back(*kind);
    }
  } else {
    out.problems = {{Problem::P1, Objective::Sum}};
  }
  return out;
}

}  // namespace

Config parse_config(std::string_view text, const std::vector<std::string>& overrides, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError("parse error: " + std::string(e.description()), static_cast<int>(e.source().begin.line));
  }
  for (const auto& o : overrides) apply_override(root, o);

  reject_unknown(root, {"network", "users", "sweep"}, "document");
  Config cfg;
  const toml::table* net = root["network"].as_table();
  if (!net) throw ConfigError("missing [network] section");
  std::optional<double> e_max;
  bool matched = false;
  read_network(*net, cfg, e_max, matched);
  const toml::array* users = root["users"].as_array();
  if (!users) throw ConfigError("missing [[users]] entries");
  read_users(*users, cfg);
  Scenario& sc = cfg.scenario;
  if (matched) {
    sc.e_max_mode = EmaxMode::Matched;
  } else if (e_max) {
    sc.e_max_mode = EmaxMode::Fixed;
    sc.e_max = *e_max;
  } else {
    sc.e_max_mode = EmaxMode::None;
  }
  if (const toml::node* s = root.get("sweep")) {
    const toml::table* t = s->as_table();
    if (!t) throw ConfigError("[sweep] must be a table", line_of(*s));
    cfg.sweep = read_sweep(*t);
  }
  try {
    sc.check();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, path.string());
}

NetworkInstance instance_from_config(const Config& config, std::uint64_t seed) {
  const Scenario& sc = config.scenario;
  std::vector<double> distances;
  for (const auto& u : sc.users) distances.push_back(u.distance);
  const ChannelRealization ch = sc.fixed_channels ? *sc.fixed_channels : sample(sc.channel, distances, seed, 0);
  const NetworkInstance net = build_instance(sc, ch, std::nullopt);
  switch (sc.e_max_mode) {
    case EmaxMode::None: return net;
    case EmaxMode::Fixed: return net.with_e_max(sc.e_max);
    case EmaxMode::Matched: {
      const double e = matched_emax({net.harvest_only()});
      if (!(e > 0.0)) throw ConfigError("matched E_max is zero for this realization");
      return net.with_e_max(e);
    }
  }
  return net;
}

ExperimentSpec experiment_from_config(const Config& config) {
  if (!config.sweep) throw ConfigError("config has no [sweep] section");
  ExperimentSpec spec;
  spec.scenario = "custom";
  spec.base = config.scenario;
  spec.swept_param = config.sweep->param;
  spec.values = config.sweep->values;
  spec.realizations = config.sweep->realizations;
  spec.seed = config.sweep->seed;
  spec.problems = config.sweep->problems;
  try {
    spec.check();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace wpcn
