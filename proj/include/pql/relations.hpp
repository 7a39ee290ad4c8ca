#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pql/petri.hpp"
#include "pql/statespace.hpp"
#include "pql/unfolding.hpp"

namespace pql {

// A PQL task: a non-empty set of non-empty labels.
using Task = std::set<std::string>;

void validate_task(const Task& task);  // throws std::invalid_argument

enum class Predicate {
  CanOccur,
  AlwaysOccurs,
  CanConflict,
  CanCooccur,
  Conflict,
  Cooccur,
  TotalCausal,
  TotalConcurrent,
};

inline constexpr Predicate kAllPredicates[] = {
    Predicate::CanOccur,  Predicate::AlwaysOccurs, Predicate::CanConflict, Predicate::CanCooccur,
    Predicate::Conflict,  Predicate::Cooccur,      Predicate::TotalCausal, Predicate::TotalConcurrent};
inline constexpr Predicate kBinaryPredicates[] = {Predicate::CanConflict, Predicate::CanCooccur,
                                                  Predicate::Conflict,    Predicate::Cooccur,
                                                  Predicate::TotalCausal, Predicate::TotalConcurrent};

bool is_unary(Predicate p);
bool is_symmetric(Predicate p);
std::string_view predicate_name(Predicate p);
std::optional<Predicate> predicate_from_name(std::string_view name);

struct UnifiedSystem {
  NetSystem system;
  std::string solitary;
  std::set<std::string> forbidden;
  bool changed = false;
};

// Routes every occurrence of a label in X through one transition. Throws
// ModelError when no transition carries a label of X.
UnifiedSystem unify(const NetSystem& system, const Task& x);

// Unification for a pair of tasks. Labels shared by X and Y are unified as
// their own group, so one occurrence counts for both tasks; the result names
// the solitary transitions standing for X and for Y. For disjoint tasks this
// is unify(unify(S, X), Y).
struct PairUnification {
  NetSystem system;
  std::vector<std::string> xs;
  std::vector<std::string> ys;
  bool changed = false;
};

PairUnification unify_pair(const NetSystem& system, const Task& x, const Task& y);

struct PairRelations {
  bool can_conflict_xy = false;
  bool can_conflict_yx = false;
  bool can_cooccur = false;
  bool total_causal_xy = false;
  bool total_causal_yx = false;
  bool total_concurrent = false;

  bool conflict() const { return can_conflict_xy && can_conflict_yx && !can_cooccur; }
  bool cooccur() const { return !can_conflict_xy && !can_conflict_yx && can_cooccur; }
  bool get(Predicate p) const;  // value for the (X, Y) orientation
};

// Predicate evaluation for one model. Graphs and prefixes of unified systems
// are cached, so one instance should serve many questions about the same
// model. Not thread-safe; use one instance per thread.
class ModelRelations {
 public:
  explicit ModelRelations(NetSystem system, std::size_t budget = kDefaultStateBudget);

  const NetSystem& system() const { return system_; }

  bool can_occur(const Task& x);
  bool always_occurs(const Task& x);
  bool binary(Predicate p, const Task& x, const Task& y);
  bool evaluate(Predicate p, const Task& x, const Task* y = nullptr);
  PairRelations pair(const Task& x, const Task& y);

  // Task restricted to labels the model actually carries.
  Task effective(const Task& x) const;

 private:
  struct Unified {
    NetSystem system;
    TransitionMask xs, ys;
    std::unique_ptr<ReachabilityGraph> graph;
    std::unique_ptr<Prefix> prefix;
  };
  Unified& unified(const Task& x, const Task& y);
  const ReachabilityGraph& graph(Unified& u);
  const Prefix& prefix(Unified& u);

  NetSystem system_;
  std::size_t budget_;
  std::set<std::string> labels_;
  std::map<std::pair<Task, Task>, std::unique_ptr<Unified>> cache_;
};

// Convenience wrappers building fresh state for a single question.
bool can_occur(const NetSystem& s, const Task& x);
bool always_occurs(const NetSystem& s, const Task& x);
bool can_conflict(const NetSystem& s, const Task& x, const Task& y);
bool can_cooccur(const NetSystem& s, const Task& x, const Task& y);
bool conflict(const NetSystem& s, const Task& x, const Task& y);
bool cooccur(const NetSystem& s, const Task& x, const Task& y);
bool total_causal(const NetSystem& s, const Task& x, const Task& y);
bool total_concurrent(const NetSystem& s, const Task& x, const Task& y);

}  // namespace pql
