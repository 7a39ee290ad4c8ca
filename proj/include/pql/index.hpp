#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pql/error.hpp"
#include "pql/relations.hpp"
#include "pql/repository.hpp"

namespace pql {

// index.log is append-only text, one record per line, tab separated:
//   # pql-index 1
//   T <model> <gen> <theta> <seed> <resolved-key> <effective-key>
//   U <model> <gen> <theta> <predicate> <key> <0|1>
//   B <model> <gen> <theta> <predicate> <key1> <key2> <0|1>
// Keys are JSON arrays of labels. U/B keys are effective tasks (labels the
// model carries), so one record answers every task with the same effective
// label set. Symmetric predicates are stored for key1 <= key2 only. Records
// whose generation differs from the catalog's are ignored.

std::string task_key(const Task& task);
Task task_from_key(const std::string& key);
std::string format_threshold(double theta);

// Labels the index seeds tasks from, resolved at theta.
struct IndexedTask {
  std::string seed;
  Task resolved;
  Task effective;
};
std::vector<IndexedTask> index_tasks(const NetSystem& system, const Vocabulary& vocabulary, double theta);

class TimeBudgetExceeded : public Error {
 public:
  TimeBudgetExceeded() : Error("time budget exceeded") {}
};

using Clock = std::chrono::steady_clock;

// All record lines for one model. Throws TimeBudgetExceeded past the deadline.
std::vector<std::string> compute_index_lines(const std::string& id, std::uint64_t generation,
                                             const NetSystem& system, const Vocabulary& vocabulary,
                                             const std::vector<double>& thresholds, std::size_t budget,
                                             std::optional<Clock::time_point> deadline = std::nullopt);

// Rewrites the log keeping only records of models present in the catalog
// with matching generation. Caller holds the store lock.
void compact_index(const std::filesystem::path& file, const Catalog& catalog);

class RelationIndex {
 public:
  RelationIndex() = default;
  static RelationIndex load(const Store& store);
  static RelationIndex load(const std::filesystem::path& file, const Catalog& catalog);

  bool has_model(const std::string& id) const { return models_.count(id) > 0; }
  std::set<double> thresholds(const std::string& id) const;
  std::size_t unary_count(const std::string& id) const;
  std::size_t binary_count(const std::string& id) const;
  std::vector<IndexedTask> tasks(const std::string& id, double theta) const;

  // x and y must already be effective tasks for the model.
  std::optional<bool> lookup(const std::string& id, Predicate p, const Task& x, const Task* y = nullptr) const;

 private:
  struct Entry {
    std::uint64_t generation = 0;
    std::set<double> thresholds;
    std::map<double, std::vector<IndexedTask>> tasks;
    std::map<std::pair<Predicate, std::string>, bool> unary;
    std::map<std::tuple<Predicate, std::string, std::string>, bool> binary;
  };
  std::map<std::string, Entry> models_;
};

// Predicate evaluation for queries: index first, fresh computation on a miss.
class PredicateEngine {
 public:
  PredicateEngine(const Repository& repo, const RelationIndex* index, std::size_t budget = kDefaultStateBudget,
                  std::function<void(const std::string&)> warn = {});

  // One per model and worker; not thread-safe.
  class Model {
   public:
    bool evaluate(Predicate p, const Task& x, const Task* y = nullptr);
    const std::set<std::string>& labels() const { return labels_; }

   private:
    friend class PredicateEngine;
    Model(const PredicateEngine& engine, const std::string& id);
    const PredicateEngine& engine_;
    std::string id_;
    const NetSystem& system_;
    std::set<std::string> labels_;
    std::unique_ptr<ModelRelations> fresh_;
    bool warned_ = false;
  };

  Model model(const std::string& id) const { return Model(*this, id); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  const Repository& repo_;
  const RelationIndex* index_;
  std::size_t budget_;
  std::function<void(const std::string&)> warn_;
  mutable std::atomic<std::size_t> hits_{0}, misses_{0};
};

struct IndexSettings {
  std::vector<double> thresholds{1.0, 0.75};
  double max_seconds = 300;  // per model; 0 means no time at all
  std::size_t budget = kDefaultStateBudget;
};

struct IndexOutcome {
  ModelStatus status = ModelStatus::Unindexed;
  std::string reason;
  std::size_t records = 0;
  double seconds = 0;
};

// Checks and indexes one model now, claiming it under the given name.
IndexOutcome index_model(Store& store, const std::string& id, const IndexSettings& settings,
                         const std::string& claimant = "cli");

struct BotOptions {
  std::string name = "bot";
  double sleep_seconds = 10;
  IndexSettings settings;
  bool exit_when_idle = false;
  std::function<void(const std::string&)> log;             // receives formatted lines
  std::function<void(const std::string&)> before_index;    // test hook: runs after a claim
  std::function<std::optional<double>(const std::string&)> max_seconds_for;  // per-model override
  const std::atomic<bool>* stop = nullptr;
};

// Claims the first unindexed model (by id) for `name`, atomically.
std::optional<ModelRecord> claim_next(Store& store, const std::string& name);

void run_bot(Store& store, const BotOptions& options);

}  // namespace pql
