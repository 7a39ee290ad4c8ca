#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pql/index.hpp"
#include "pql/labels.hpp"
#include "pql/query/ast.hpp"
#include "pql/repository.hpp"

namespace pql::query {

struct EvalOptions {
  double default_similarity = kDefaultSimilarity;
  std::size_t threads = 1;
};

struct ResultRow {
  std::string id;
  std::vector<std::pair<std::string, std::string>> attributes;
  bool operator==(const ResultRow&) const = default;
};

struct TaskResolution {
  std::string text;  // the task as written
  Task labels;
};

struct QueryResult {
  std::vector<std::string> attributes;  // names rows may carry, in output order
  std::vector<ResultRow> rows;          // sorted by id
  std::vector<TaskResolution> tasks;    // in order of first appearance
  std::map<std::string, std::string> errors;  // model id -> why it could not be evaluated

  std::vector<std::string> ids() const;
};

using TaskSet = std::set<Task>;

// Throws EvaluationError on references to undeclared variables (each
// declaration sees only the ones before it).
void check_variables(const Query& q);

Task resolve_task(const TaskExpr& t, double default_similarity, const Vocabulary& vocab);

QueryResult evaluate(const Query& q, const Repository& repo, const PredicateEngine& engine,
                     const EvalOptions& options = {});

}  // namespace pql::query
