#pragma once

// Brute-force reference implementations used only by tests. Nothing here is
// tuned for speed; the point is to stay independent of statespace/unfolding.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pql/petri.hpp"
#include "pql/relations.hpp"

namespace pql::oracle {

struct Executions {
  std::vector<std::vector<std::size_t>> runs;  // transition indices, each ending in [o]
  bool complete = true;                         // false if some branch hit max_len
};

Executions enumerate_executions(const NetSystem& system, std::size_t max_len);

// A process: conditions and events mapped to places and transitions.
struct ProcessNet {
  std::vector<std::size_t> cond_place;
  std::vector<std::optional<std::size_t>> cond_producer;
  std::vector<std::size_t> event_transition;
  std::vector<std::vector<std::size_t>> event_pre, event_post;
  std::vector<std::vector<bool>> causes;  // causes[e][f]: (e, f) in G+

  std::size_t event_count() const { return event_transition.size(); }
  bool causal(std::size_t e, std::size_t f) const { return causes[e][f]; }
  bool concurrent(std::size_t e, std::size_t f) const { return !causes[e][f] && !causes[f][e]; }
  // Transition sequences consistent with the causal order.
  std::vector<std::vector<std::size_t>> linearizations() const;
};

// All processes describing executions of an acyclic system. Throws
// ModelError on cyclic nets.
std::vector<ProcessNet> enumerate_processes(const NetSystem& system);

struct BoundedProcesses {
  std::vector<ProcessNet> processes;  // those reaching [o] with at most max_events events
  bool complete = true;
};
BoundedProcesses enumerate_processes_bounded(const NetSystem& system, std::size_t max_events);

// Label-level definitions over a set of processes. xs and ys are label sets
// standing for one task each.
bool label_predicate(Predicate p, const NetSystem& system, const std::vector<ProcessNet>& processes,
                     const std::set<std::string>& xs, const std::set<std::string>& ys);

// Interleaving predicates (canOccur .. cooccur) evaluated over executions.
bool label_predicate_on_executions(Predicate p, const NetSystem& system, const Executions& runs,
                                   const std::set<std::string>& xs, const std::set<std::string>& ys);

// Unify the tasks, enumerate processes of the result, apply the definitions.
// Tasks matching nothing give false.
bool oracle_predicate(Predicate p, const NetSystem& system, const Task& x, const Task* y = nullptr);

// Same, but over the original net with label sets and no unification. Only
// meaningful for the interleaving predicates or single-match tasks.
bool direct_predicate(Predicate p, const NetSystem& system, const Task& x, const Task* y = nullptr);

}  // namespace pql::oracle
