#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pql/generate.hpp"
#include "pql/index.hpp"
#include "pql/repository.hpp"

namespace pql::bench {

// One query template; placeholders {L1}, {L2}, ... stand for labels.
struct Template {
  std::string code;  // subgroup, e.g. "3.b.4"
  std::string text;
};

// Reads <dir>/<code>.pql, one template per non-blank line ("--" lines skipped).
std::vector<Template> load_templates(const std::filesystem::path& dir);

// filter: "all", a category ("1", "2", "3"), a group ("2.a") or a subgroup ("3.b.4").
std::vector<Template> select_templates(const std::vector<Template>& all, const std::string& filter);

std::size_t placeholder_count(const std::string& text);

// Fills placeholders with labels drawn from `labels`, distinct while the pool allows.
std::string instantiate(const std::string& text, const std::vector<std::string>& labels, std::mt19937_64& rng);

struct CollectionOptions {
  std::size_t models = 16;
  std::uint64_t seed = 1;
  GeneratorOptions generator;
  std::string id_prefix = "g";
  bool index = true;
  IndexSettings settings;
};

// Stores freshly generated sound nets (ids g000, g001, ...) and indexes them.
std::vector<std::string> build_collection(Store& store, const CollectionOptions& options);

// The listed models only; declared nesting is not carried over.
Repository subset(const Repository& repo, const std::vector<std::string>& ids);

struct Options {
  std::size_t instances = 3;
  std::size_t threads = 1;
  std::size_t repeats = 1;  // evaluations per instance; the minimum time counts
  std::uint64_t seed = 1;
  double default_similarity = kDefaultSimilarity;
};

struct Run {
  std::string code;
  std::string query;
  double seconds = 0;
  std::size_t models = 0;
  std::size_t matches = 0;
  std::size_t errors = 0;
};

struct Report {
  std::vector<Run> runs;
  std::size_t threads = 1;
  std::size_t models = 0;
  double mean_query_seconds() const;
  double mean_check_seconds() const;  // per model-query
  std::map<char, double> mean_by_category() const;
};

// Instantiates every template `instances` times and evaluates each query.
// Labels come from the repository vocabulary. index may be null.
Report run(const Repository& repo, const RelationIndex* index, const std::vector<Template>& templates,
           const Options& options);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace pql::bench
