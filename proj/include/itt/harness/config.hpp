// Copyright 2026 The ITT Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ITT_HARNESS_CONFIG_HPP
#define ITT_HARNESS_CONFIG_HPP

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "itt/envs.hpp"
#include "itt/es_opt.hpp"
#include "itt/towers.hpp"

namespace itt {

enum class PolicyKind { kItt, kIot, kExplicit };
enum class FastMode { kNone, kSrp, kRft };
enum class SelectionRule { kArgmax, kSoftmax };

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kItt: return "itt";
    case PolicyKind::kIot: return "iot";
    case PolicyKind::kExplicit: return "explicit";
  }
  return "itt";
}

inline std::string_view to_string(FastMode m) {
  switch (m) {
    case FastMode::kNone: return "none";
    case FastMode::kSrp: return "srp";
    case FastMode::kRft: return "rft";
  }
  return "none";
}

inline std::string_view to_string(SelectionRule r) {
  return r == SelectionRule::kSoftmax ? "softmax" : "argmax";
}

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kItt;
  std::size_t latent_dim = 0;  // also the hidden width; 0 = action vector width
  std::size_t state_layers = 0;
  std::size_t action_layers = 0;
  std::size_t net_layers = 0;  // IOT / explicit depth
  Activation activation = Activation::kReluHiddenLinearOut;
  KernelKind kernel = KernelKind::kDotProduct;
  SelectionRule selection = SelectionRule::kArgmax;
};

struct ActionsConfig {
  std::size_t num_samples = 1000;
  ResampleMode resample = ResampleMode::kPerStep;
};

struct FastConfig {
  FastMode mode = FastMode::kNone;
  std::size_t srp_m = 3;
  std::size_t srp_budget = 0;  // 0 = N / 8
  bool median_shift = true;
  std::size_t rft_features = 256;
};

struct RunConfig {
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "runs/out";
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::size_t eval_episodes = 10;
  std::size_t eval_every = 0;  // 0 = final evaluation only
  std::optional<double> stop_reward;
  bool timing = true;
};

struct TrainConfig {
  EnvSpec env = make_env_spec(EnvId::kCartPole);
  PolicyConfig policy;
  ActionsConfig actions;
  FastConfig fast;
  EsConfig es;
  RunConfig run;
};

/// Per-environment defaults: sigma and layer counts of the reference
/// architectures (state tower, action tower, one-tower / explicit nets).
struct EnvDefaults {
  double sigma;
  std::size_t state_layers;
  std::size_t action_layers;
  std::size_t net_layers;
};

inline EnvDefaults env_defaults(EnvId id) {
  switch (id) {
    case EnvId::kCartPole: return {1.0, 2, 1, 3};
    case EnvId::kMountainCar: return {1.0, 2, 1, 3};
    case EnvId::kMountainCarContinuous: return {1.0, 1, 1, 2};
    case EnvId::kPendulum: return {1.0, 1, 1, 2};
  }
  return {1.0, 1, 1, 2};
}

/// Tower shapes and the flat parameter layout for a config.
struct Architecture {
  PolicyKind kind = PolicyKind::kItt;
  TowerSpec state_tower;   // ITT only
  TowerSpec action_tower;  // ITT only
  TowerSpec net;           // IOT energy net or explicit net
  std::size_t state_params = 0;
  std::size_t action_params = 0;

  std::size_t dim() const { return state_params + action_params; }
};

inline Architecture resolve_architecture(const TrainConfig& cfg) {
  Architecture arch;
  arch.kind = cfg.policy.kind;
  const std::size_t obs = cfg.env.obs_dim;
  const std::size_t adim = cfg.env.action_space.vector_dim();
  const std::size_t d = cfg.policy.latent_dim == 0 ? adim : cfg.policy.latent_dim;
  const Activation act = cfg.policy.activation;
  switch (cfg.policy.kind) {
    case PolicyKind::kItt:
      arch.state_tower = TowerSpec::uniform(obs, d, d, cfg.policy.state_layers, act);
      arch.action_tower = TowerSpec::uniform(adim, d, d, cfg.policy.action_layers, act);
      arch.state_params = param_count(arch.state_tower);
      arch.action_params = param_count(arch.action_tower);
      break;
    case PolicyKind::kIot:
      arch.net = TowerSpec::uniform(obs + adim, d, 1, cfg.policy.net_layers, act);
      arch.state_params = param_count(arch.net);
      break;
    case PolicyKind::kExplicit:
      arch.net = TowerSpec::uniform(obs, d, adim, cfg.policy.net_layers, act);
      arch.state_params = param_count(arch.net);
      break;
  }
  return arch;
}

namespace detail {

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"env", {"id", "max_steps"}},
      {"policy", {"kind", "latent_dim", "state_layers", "action_layers", "net_layers", "activation",
                  "kernel", "selection"}},
      {"actions", {"num_samples", "resample"}},
      {"fast", {"mode", "srp_m", "srp_budget", "median_shift", "rft_features"}},
      {"es", {"sigma", "learning_rate", "perturbations", "iterations", "lazy_period"}},
      {"run", {"seeds", "out_dir", "workers", "eval_episodes", "eval_every", "stop_reward", "timing"}},
  };
  return schema;
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

class SectionReader {
 public:
  SectionReader(const boost::property_tree::ptree& root, std::string section)
      : node_(root.get_child_optional(section)), section_(std::move(section)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (!node_) return std::nullopt;
    auto v = node_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::string name(const std::string& key) const { return section_ + "." + key; }

  std::optional<std::string> str(const std::string& key) const { return raw(key); }

  std::optional<std::uint64_t> count(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    return parse_count(*r, name(key));
  }

  std::optional<double> real(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(*r, &used);
      if (used != r->size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + name(key) + "': expected a real number, got '" + *r + "'");
    }
  }

  std::optional<bool> flag(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    if (*r == "true" || *r == "1" || *r == "yes") return true;
    if (*r == "false" || *r == "0" || *r == "no") return false;
    throw ConfigError("key '" + name(key) + "': expected true/false, got '" + *r + "'");
  }

  std::optional<std::vector<std::uint64_t>> count_list(const std::string& key) const {
    auto r = raw(key);
    if (!r) return std::nullopt;
    std::string s = *r;
    for (char& c : s) {
      if (c == '[' || c == ']' || c == ',') c = ' ';
    }
    std::istringstream in(s);
    std::vector<std::uint64_t> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_count(tok, name(key)));
    if (out.empty()) throw ConfigError("key '" + name(key) + "': empty list");
    return out;
  }

  static std::uint64_t parse_count(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

 private:
  boost::optional<const boost::property_tree::ptree&> node_;
  std::string section_;
};

template <typename Fn>
auto with_key(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.find(key) != std::string::npos) throw;
    throw ConfigError("key '" + key + "': " + what);
  } catch (const Error& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

}  // namespace detail

/// Checks cross-field invariants; throws ConfigError naming the offending key.
inline void validate_config(const TrainConfig& cfg) {
  const bool itt = cfg.policy.kind == PolicyKind::kItt;
  if (cfg.fast.mode != FastMode::kNone && !itt) {
    throw ConfigError("key 'fast.mode': fast selection requires policy.kind = itt");
  }
  if (cfg.es.lazy_period == 0) throw ConfigError("key 'es.lazy_period': must be >= 1");
  if (cfg.es.lazy_period > 1 && !itt) {
    throw ConfigError("key 'es.lazy_period': lazy updates require policy.kind = itt");
  }
  if (!(cfg.es.sigma > 0.0)) throw ConfigError("key 'es.sigma': must be positive");
  if (!(cfg.es.eta >= 0.0)) throw ConfigError("key 'es.learning_rate': must be non-negative");
  if (cfg.actions.num_samples == 0) throw ConfigError("key 'actions.num_samples': must be >= 1");
  if (cfg.fast.mode == FastMode::kSrp && (cfg.fast.srp_m == 0 || cfg.fast.srp_m > 64)) {
    throw ConfigError("key 'fast.srp_m': must be in [1, 64]");
  }
  if (cfg.fast.mode == FastMode::kRft && cfg.fast.rft_features == 0) {
    throw ConfigError("key 'fast.rft_features': must be >= 1");
  }
  if (cfg.run.seeds.empty()) throw ConfigError("key 'run.seeds': at least one seed required");
  if (cfg.run.eval_episodes == 0) throw ConfigError("key 'run.eval_episodes': must be >= 1");
  const auto layers_ok = [](std::size_t n) { return n >= 1; };
  if (itt && (!layers_ok(cfg.policy.state_layers) || !layers_ok(cfg.policy.action_layers))) {
    throw ConfigError("key 'policy.state_layers': tower layer counts must be >= 1");
  }
  if (!itt && !layers_ok(cfg.policy.net_layers)) {
    throw ConfigError("key 'policy.net_layers': must be >= 1");
  }
  const Architecture arch = detail::with_key("policy", [&] { return resolve_architecture(cfg); });
  if (cfg.es.num_perturbations > arch.dim()) {
    throw ConfigError("key 'es.perturbations': M = " + std::to_string(cfg.es.num_perturbations) +
                      " exceeds parameter dimension D = " + std::to_string(arch.dim()));
  }
}

/// Parses INI-style text. Unknown sections/keys and malformed values raise
/// ConfigError naming the key; unset values take documented defaults.
inline TrainConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  const auto& schema = detail::config_schema();
  for (const auto& [section, node] : root) {
    auto it = schema.find(section);
    if (it == schema.end()) {
      if (node.empty()) throw ConfigError("key '" + section + "': keys must live inside a [section]");
      throw ConfigError("unknown section '" + section + "'");
    }
    for (const auto& [key, value] : node) {
      if (!it->second.contains(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  using detail::SectionReader;
  TrainConfig cfg;
  const SectionReader env(root, "env");
  const auto id_str = env.str("id");
  if (!id_str) throw ConfigError("key 'env.id': required");
  const EnvId id = detail::with_key("env.id", [&] { return parse_env_id(*id_str); });
  cfg.env = make_env_spec(id, env.count("max_steps").value_or(0));
  const EnvDefaults defs = env_defaults(id);

  const SectionReader pol(root, "policy");
  if (auto k = pol.str("kind")) {
    if (*k == "itt") cfg.policy.kind = PolicyKind::kItt;
    else if (*k == "iot") cfg.policy.kind = PolicyKind::kIot;
    else if (*k == "explicit") cfg.policy.kind = PolicyKind::kExplicit;
    else throw ConfigError("key 'policy.kind': unknown policy '" + *k + "'");
  }
  cfg.policy.latent_dim = pol.count("latent_dim").value_or(0);
  cfg.policy.state_layers = pol.count("state_layers").value_or(defs.state_layers);
  cfg.policy.action_layers = pol.count("action_layers").value_or(defs.action_layers);
  cfg.policy.net_layers = pol.count("net_layers").value_or(defs.net_layers);
  if (auto a = pol.str("activation")) {
    cfg.policy.activation = detail::with_key("policy.activation", [&] { return parse_activation(*a); });
  }
  if (auto k = pol.str("kernel"); k && *k != "dot_product") {
    throw ConfigError("key 'policy.kernel': only dot_product is supported");
  }
  if (auto s = pol.str("selection")) {
    if (*s == "argmax") cfg.policy.selection = SelectionRule::kArgmax;
    else if (*s == "softmax") cfg.policy.selection = SelectionRule::kSoftmax;
    else throw ConfigError("key 'policy.selection': expected argmax or softmax");
  }

  const SectionReader act(root, "actions");
  cfg.actions.num_samples = act.count("num_samples").value_or(1000);
  if (auto r = act.str("resample")) {
    cfg.actions.resample = detail::with_key("actions.resample", [&] { return parse_resample_mode(*r); });
  }

  const SectionReader fast(root, "fast");
  if (auto m = fast.str("mode")) {
    if (*m == "none") cfg.fast.mode = FastMode::kNone;
    else if (*m == "srp") cfg.fast.mode = FastMode::kSrp;
    else if (*m == "rft") cfg.fast.mode = FastMode::kRft;
    else throw ConfigError("key 'fast.mode': expected none, srp or rft");
  }
  cfg.fast.srp_m = fast.count("srp_m").value_or(3);
  cfg.fast.srp_budget = fast.count("srp_budget").value_or(0);
  cfg.fast.median_shift = fast.flag("median_shift").value_or(true);
  cfg.fast.rft_features = fast.count("rft_features").value_or(256);
  if (cfg.fast.mode == FastMode::kRft && cfg.policy.selection == SelectionRule::kArgmax &&
      !pol.str("selection")) {
    cfg.policy.selection = SelectionRule::kSoftmax;
  }

  const SectionReader es(root, "es");
  cfg.es.sigma = es.real("sigma").value_or(defs.sigma);
  cfg.es.eta = es.real("learning_rate").value_or(0.01);
  cfg.es.num_perturbations = es.count("perturbations").value_or(0);
  cfg.es.iterations = es.count("iterations").value_or(100);
  cfg.es.lazy_period = es.count("lazy_period").value_or(1);
  cfg.es.resample = cfg.actions.resample;

  const SectionReader run(root, "run");
  if (auto s = run.count_list("seeds")) cfg.run.seeds = *s;
  if (auto o = run.str("out_dir")) cfg.run.out_dir = *o;
  cfg.run.workers = run.count("workers").value_or(0);
  cfg.run.eval_episodes = run.count("eval_episodes").value_or(10);
  cfg.run.eval_every = run.count("eval_every").value_or(0);
  cfg.run.stop_reward = run.real("stop_reward");
  cfg.run.timing = run.flag("timing").value_or(true);

  validate_config(cfg);
  const Architecture arch = resolve_architecture(cfg);
  if (cfg.es.num_perturbations == 0) cfg.es.num_perturbations = arch.dim();
  return cfg;
}

inline TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical INI rendering; parse_config(to_ini(c)) reproduces c.
inline std::string to_ini(const TrainConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[env]\nid = " << to_string(c.env.id) << "\nmax_steps = " << c.env.max_steps << "\n\n";
  o << "[policy]\nkind = " << to_string(c.policy.kind) << "\nlatent_dim = " << c.policy.latent_dim
    << "\nstate_layers = " << c.policy.state_layers << "\naction_layers = " << c.policy.action_layers
    << "\nnet_layers = " << c.policy.net_layers << "\nactivation = " << to_string(c.policy.activation)
    << "\nkernel = dot_product\nselection = " << to_string(c.policy.selection) << "\n\n";
  o << "[actions]\nnum_samples = " << c.actions.num_samples
    << "\nresample = " << to_string(c.actions.resample) << "\n\n";
  o << "[fast]\nmode = " << to_string(c.fast.mode) << "\nsrp_m = " << c.fast.srp_m
    << "\nsrp_budget = " << c.fast.srp_budget << "\nmedian_shift = " << (c.fast.median_shift ? "true" : "false")
    << "\nrft_features = " << c.fast.rft_features << "\n\n";
  o << "[es]\nsigma = " << c.es.sigma << "\nlearning_rate = " << c.es.eta
    << "\nperturbations = " << c.es.num_perturbations << "\niterations = " << c.es.iterations
    << "\nlazy_period = " << c.es.lazy_period << "\n\n";
  o << "[run]\nseeds = ";
  for (std::size_t i = 0; i < c.run.seeds.size(); ++i) o << (i ? "," : "") << c.run.seeds[i];
  o << "\nout_dir = " << c.run.out_dir << "\nworkers = " << c.run.workers
    << "\neval_episodes = " << c.run.eval_episodes << "\neval_every = " << c.run.eval_every;
  if (c.run.stop_reward) o << "\nstop_reward = " << *c.run.stop_reward;
  o << "\ntiming = " << (c.run.timing ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace itt

#endif  // ITT_HARNESS_CONFIG_HPP
