#include "mctsvs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mctsvs/errors.hpp"
#include "mctsvs/objective.hpp"

namespace mctsvs {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

ConfigError bad_value(const std::string& key, const std::string& value, const std::string& what) {
  return ConfigError("invalid value '" + value + "' for key '" + key + "': " + what);
}

int get_int_in(const KeyValueFile& f, const std::string& key, int fallback, int lo) {
  const std::int64_t v = f.get_int(key, fallback);
  if (v < lo || v > 1'000'000'000) {
    throw bad_value(key, std::to_string(v), "must be at least " + std::to_string(lo));
  }
  return static_cast<int>(v);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& source) {
  KeyValueFile f;
  f.source_ = source;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
    if (!f.values_.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return f;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::int64_t v = 0;
  if (!parse_number(it->second, v)) throw bad_value(key, it->second, "expected an integer");
  return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double v = 0.0;
  if (!parse_number(it->second, v)) throw bad_value(key, it->second, "expected a number");
  return v;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw bad_value(key, v, "expected true or false");
}

void KeyValueFile::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(source_ + ": unknown key '" + key + "'");
    }
  }
}

const char* to_string(Method method) {
  switch (method) {
    case Method::mcts_vs:
      return "mcts_vs";
    case Method::dropout:
      return "dropout";
    case Method::vanilla_bo:
      return "vanilla_bo";
    case Method::random_search:
      return "random_search";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "mcts_vs") return Method::mcts_vs;
  if (name == "dropout") return Method::dropout;
  if (name == "vanilla_bo") return Method::vanilla_bo;
  if (name == "random_search") return Method::random_search;
  throw ConfigError("unknown value '" + name + "' for key 'method'");
}

double RunConfig::cp_for_problem() const { return c_p.value_or(default_cp(problem)); }

void RunConfig::validate() const {
  try {
    (void)make_problem(problem);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("key 'problem': ") + e.what());
  }
  if (seeds.empty()) throw ConfigError("key 'seeds': at least one seed is required");
  if (budget < 1) throw ConfigError("key 'budget': must be positive");
  if (n_v < 1) throw ConfigError("key 'n_v': must be positive");
  if (n_s < 1) throw ConfigError("key 'n_s': must be positive");
  if (n_bad < 1) throw ConfigError("key 'n_bad': must be positive");
  if (n_split < 1) throw ConfigError("key 'n_split': must be positive");
  if (k < 1) throw ConfigError("key 'k': must be positive");
  if (c_p && !(*c_p >= 0.0)) throw ConfigError("key 'c_p': must be nonnegative");
  if (d < 1) throw ConfigError("key 'd': must be positive");
  if (initial_points() < 0) throw ConfigError("key 'n_init': must be nonnegative");
  switch (method) {
    case Method::mcts_vs:
      if (budget < 2 * n_v * n_s) {
        throw ConfigError("key 'budget': must cover the 2 * n_v * n_s initial evaluations");
      }
      break;
    case Method::dropout:
    case Method::vanilla_bo:
      if (budget < initial_points()) {
        throw ConfigError("key 'budget': must cover the n_init initial evaluations");
      }
      break;
    case Method::random_search:
      break;
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dots = item.find("..");
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    if (dots == std::string::npos) {
      if (!parse_number(item, lo)) throw bad_value("seeds", item, "expected an integer");
      hi = lo;
    } else if (!parse_number(trim(item.substr(0, dots)), lo) ||
               !parse_number(trim(item.substr(dots + 2)), hi) || hi < lo || hi - lo > 100000) {
      throw bad_value("seeds", item, "expected an inclusive range a..b");
    }
    for (std::uint64_t s = lo;; ++s) {
      out.push_back(s);
      if (s == hi) break;
    }
  }
  if (out.empty()) throw ConfigError("key 'seeds': at least one seed is required");
  return out;
}

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "problem", "method",   "optimizer",   "budget",      "seeds",         "output_dir",
      "n_v",     "n_s",      "n_bad",       "n_split",     "k",             "c_p",
      "fill",    "d",        "n_init",      "gp_restarts", "gp_max_iterations", "candidates",
      "record_timing", "threads"};
  return keys;
}

RunConfig parse_run_config(const KeyValueFile& f) {
  f.require_known(run_config_keys());
  RunConfig c;
  c.problem = f.get_string("problem", c.problem);
  c.method = method_from_string(f.get_string("method", to_string(c.method)));
  try {
    c.optimizer = optimizer_from_string(f.get_string("optimizer", to_string(c.optimizer)));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("key 'optimizer': ") + e.what());
  }
  c.budget = f.get_int("budget", c.budget);
  if (f.has("seeds")) c.seeds = parse_seed_list(f.get_string("seeds", ""));
  c.output_dir = f.get_string("output_dir", "");
  c.n_v = get_int_in(f, "n_v", c.n_v, 1);
  c.n_s = get_int_in(f, "n_s", c.n_s, 1);
  c.n_bad = get_int_in(f, "n_bad", c.n_bad, 1);
  c.n_split = get_int_in(f, "n_split", c.n_split, 1);
  c.k = get_int_in(f, "k", c.k, 1);
  if (f.has("c_p")) c.c_p = f.get_double("c_p", 0.0);
  try {
    c.fill = fill_strategy_from_string(f.get_string("fill", to_string(c.fill)));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("key 'fill': ") + e.what());
  }
  c.d = get_int_in(f, "d", c.d, 1);
  if (f.has("n_init")) c.n_init = get_int_in(f, "n_init", 0, 0);
  c.gp_restarts = get_int_in(f, "gp_restarts", c.gp_restarts, 0);
  c.gp_max_iterations = get_int_in(f, "gp_max_iterations", c.gp_max_iterations, 1);
  c.candidates = get_int_in(f, "candidates", c.candidates, 0);
  c.record_timing = f.get_bool("record_timing", c.record_timing);
  c.threads = static_cast<unsigned>(get_int_in(f, "threads", static_cast<int>(c.threads), 0));
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(KeyValueFile::load(path));
}

const std::vector<std::string>& lab_config_keys() {
  static const std::vector<std::string> keys = {
      "dimension", "resolution", "upper",   "signal_variance", "length_scale", "noise_variance",
      "delta",     "a",          "b",       "horizon",         "runs",         "seed",
      "policy",    "function",   "threads", "output"};
  return keys;
}

LabFileConfig parse_lab_config(const KeyValueFile& f) {
  f.require_known(lab_config_keys());
  LabFileConfig out;
  auto& lab = out.lab;
  lab.world.dimension = get_int_in(f, "dimension", lab.world.dimension, 1);
  lab.world.resolution = get_int_in(f, "resolution", lab.world.resolution, 2);
  lab.world.upper = f.get_double("upper", lab.world.upper);
  lab.world.kernel.signal_variance =
      f.get_double("signal_variance", lab.world.kernel.signal_variance);
  lab.world.kernel.length_scale = f.get_double("length_scale", lab.world.kernel.length_scale);
  const double noise = f.get_double("noise_variance", lab.world.kernel.noise_variance);
  if (!(noise > 0.0)) throw bad_value("noise_variance", std::to_string(noise), "must be positive");
  lab.world.kernel.noise_variance = noise;
  lab.params.noise_variance = noise;
  lab.params.delta = f.get_double("delta", lab.params.delta);
  if (!(lab.params.delta > 0.0 && lab.params.delta < 1.0)) {
    throw bad_value("delta", std::to_string(lab.params.delta), "must lie in (0, 1)");
  }
  lab.params.a = f.get_double("a", lab.params.a);
  lab.params.b = f.get_double("b", lab.params.b);
  if (!(lab.params.a > 0.0)) throw bad_value("a", std::to_string(lab.params.a), "must be positive");
  if (!(lab.params.b > 0.0)) throw bad_value("b", std::to_string(lab.params.b), "must be positive");
  lab.horizon = get_int_in(f, "horizon", lab.horizon, 1);
  lab.runs = get_int_in(f, "runs", lab.runs, 1);
  const std::int64_t seed = f.get_int("seed", 0);
  if (seed < 0) throw bad_value("seed", std::to_string(seed), "must be nonnegative");
  lab.seed = static_cast<std::uint64_t>(seed);
  lab.policy = f.get_string("policy", lab.policy);
  lab.function = f.get_string("function", lab.function);
  lab.threads = static_cast<unsigned>(get_int_in(f, "threads", static_cast<int>(lab.threads), 0));
  out.output = f.get_string("output", "");
  try {
    lab.world.validate();
    (void)regret::parse_policy(lab.policy, lab.world.dimension);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("key 'policy': ") + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid keys: ") + e.what());
  }
  return out;
}

LabFileConfig load_lab_config(const std::filesystem::path& path) {
  return parse_lab_config(KeyValueFile::load(path));
}

}  // namespace mctsvs
