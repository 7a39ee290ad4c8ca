#include "pql/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace pql {

namespace {

template <class T>
T number(const std::string& key, const std::string& text) {
  try {
    return boost::lexical_cast<T>(boost::trim_copy(text));
  } catch (const boost::bad_lexical_cast&) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
}

std::vector<double> number_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts)
    if (!p.empty()) out.push_back(number<double>(key, p));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

void apply(Config& c, const std::string& key, const std::string& value) {
  if (key == "store") {
    c.store = boost::trim_copy(value);
  } else if (key == "numberOfQueryThreads") {
    auto n = number<long long>(key, value);
    if (n < 1) throw ConfigError(key + ": must be at least 1");
    c.query_threads = static_cast<std::size_t>(n);
  } else if (key == "stateBudget") {
    auto n = number<long long>(key, value);
    if (n < 1) throw ConfigError(key + ": must be at least 1");
    c.state_budget = static_cast<std::size_t>(n);
  } else if (key == "labelSimilarity.defaultThreshold") {
    c.default_similarity = number<double>(key, value);
  } else if (key == "labelSimilarity.indexedThresholds") {
    c.indexed_thresholds = number_list(key, value);
  } else if (key == "bot.sleepSeconds") {
    c.bot_sleep_seconds = number<double>(key, value);
  } else if (key == "bot.maxIndexSeconds") {
    c.max_index_seconds = number<double>(key, value);
  } else {
    throw ConfigError("unknown configuration key: " + key);
  }
}

void flatten(const boost::property_tree::ptree& tree, const std::string& prefix,
             std::map<std::string, std::string>& out) {
  for (const auto& [k, child] : tree) {
    auto key = prefix.empty() ? k : prefix + "." + k;
    if (child.empty())
      out[key] = child.data();
    else
      flatten(child, key, out);
  }
}

Config finish(std::map<std::string, std::string> values, const EnvLookup& env) {
  for (const auto& key : config_keys())
    if (auto v = env(env_name(key))) values[key] = *v;
  Config c;
  for (const auto& [k, v] : values) apply(c, k, v);
  c.validate();
  return c;
}

}  // namespace

void Config::validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (indexed_thresholds.empty()) throw ConfigError("labelSimilarity.indexedThresholds: empty list");
  for (double t : indexed_thresholds)
    if (!unit(t)) throw ConfigError("labelSimilarity.indexedThresholds: value outside [0,1]");
  if (!unit(default_similarity)) throw ConfigError("labelSimilarity.defaultThreshold: value outside [0,1]");
  if (query_threads < 1) throw ConfigError("numberOfQueryThreads: must be at least 1");
  if (bot_sleep_seconds < 0) throw ConfigError("bot.sleepSeconds: negative");
  if (max_index_seconds < 0) throw ConfigError("bot.maxIndexSeconds: negative");
  if (state_budget < 1) throw ConfigError("stateBudget: must be at least 1");
  if (store.empty()) throw ConfigError("store: empty path");
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"store",
                                             "numberOfQueryThreads",
                                             "stateBudget",
                                             "labelSimilarity.defaultThreshold",
                                             "labelSimilarity.indexedThresholds",
                                             "bot.sleepSeconds",
                                             "bot.maxIndexSeconds"};
  return keys;
}

std::string env_name(const std::string& key) {
  std::string out = "PQL_";
  for (std::size_t i = 0; i < key.size(); ++i) {
    char c = key[i];
    if (c == '.') {
      out += '_';
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      if (i > 0 && key[i - 1] != '.') out += '_';
      out += c;
    } else {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

Config parse_config(const std::string& text, const EnvLookup& env) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::map<std::string, std::string> values;
  flatten(tree, "", values);
  return finish(std::move(values), env);
}

Config load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  if (!file) return finish({}, env);
  std::ifstream in(*file);
  if (!in) throw ConfigError("cannot read config file " + file->string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), env);
  } catch (const ConfigError& e) {
    throw ConfigError(file->string() + ": " + e.what());
  }
}

}  // namespace pql
