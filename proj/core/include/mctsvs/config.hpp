#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mctsvs/inner_opt.hpp"
#include "mctsvs/regret_lab.hpp"
#include "mctsvs/vs_core.hpp"

namespace mctsvs {

/// Flat `key = value` file. Everything after '#' is a comment, blank
/// lines are ignored, and whitespace around keys and values is trimmed.
class KeyValueFile {
 public:
  /// Throws ConfigError on malformed lines or duplicate keys.
  static KeyValueFile parse(const std::string& text, const std::string& source = "<string>");
  /// Throws IoError when the file cannot be read.
  static KeyValueFile load(const std::filesystem::path& path);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

  /// Typed accessors; parse failures raise ConfigError naming the key.
  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

enum class Method { mcts_vs, dropout, vanilla_bo, random_search };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

/// One experiment: a method on a registered problem over several seeds.
struct RunConfig {
  std::string problem = "hartmann6_300";
  Method method = Method::mcts_vs;
  OptimizerKind optimizer = OptimizerKind::gp_bo;
  std::int64_t budget = 600;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir;  // empty: nothing is written

  // MCTS-VS
  int n_v = 2;
  int n_s = 3;
  int n_bad = 5;
  int n_split = 3;
  int k = 20;
  std::optional<double> c_p;  // unset: default for the problem family
  FillStrategy fill = FillStrategy::best_k;

  // Dropout
  int d = 6;

  /// Initial design size of the baselines; unset means 2 * n_v * n_s.
  std::optional<int> n_init;

  // Inner optimizer
  int gp_restarts = 3;
  int gp_max_iterations = 50;
  int candidates = 0;  // 0: min(5000, 1000 |M|)

  bool record_timing = false;
  unsigned threads = 1;  // seeds run concurrently; 0 uses every core

  [[nodiscard]] int initial_points() const { return n_init.value_or(2 * n_v * n_s); }
  [[nodiscard]] double cp_for_problem() const;
  /// Throws ConfigError (naming the key) when the problem is unknown, seeds
  /// are empty, or the budget does not cover the initialization.
  void validate() const;
};

/// Keys accepted in run configuration files.
const std::vector<std::string>& run_config_keys();

RunConfig parse_run_config(const KeyValueFile& file);
RunConfig load_run_config(const std::filesystem::path& path);

/// Regret-lab configuration and the path of the JSON report (empty: stdout).
struct LabFileConfig {
  regret::LabConfig lab;
  std::filesystem::path output;
};

const std::vector<std::string>& lab_config_keys();

LabFileConfig parse_lab_config(const KeyValueFile& file);
LabFileConfig load_lab_config(const std::filesystem::path& path);

/// Parses "1,2,5" or "2021..2025" (inclusive) or a mix of both.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace mctsvs
