#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pql/error.hpp"
#include "pql/labels.hpp"
#include "pql/statespace.hpp"

namespace pql {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Settings file (INI flavoured key=value, sections allowed):
//
//   store = /var/lib/pql
//   numberOfQueryThreads = 4
//   stateBudget = 1000000
//   [labelSimilarity]
//   defaultThreshold = 0.75
//   indexedThresholds = 1.0, 0.75
//   [bot]
//   sleepSeconds = 10
//   maxIndexSeconds = 300
//
// A key inside a section is addressed as section.key. Every key can be
// overridden by an environment variable: PQL_ plus the key in upper snake
// case with dots as underscores, e.g. PQL_NUMBER_OF_QUERY_THREADS or
// PQL_LABEL_SIMILARITY_DEFAULT_THRESHOLD.
struct Config {
  std::filesystem::path store = "pql-store";
  std::vector<double> indexed_thresholds{1.0, 0.75};
  double default_similarity = kDefaultSimilarity;
  std::size_t query_threads = 1;
  double bot_sleep_seconds = 10;
  double max_index_seconds = 300;
  std::size_t state_budget = kDefaultStateBudget;

  // Throws ConfigError.
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::optional<std::string> process_env(const std::string& name);

// Every recognised key, in file spelling.
const std::vector<std::string>& config_keys();
std::string env_name(const std::string& key);

// Defaults, then the file (if any), then the environment. Unknown keys and
// malformed values raise ConfigError.
Config load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);
Config parse_config(const std::string& text, const EnvLookup& env = process_env);

}  // namespace pql
