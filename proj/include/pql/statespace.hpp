#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pql/petri.hpp"

namespace pql {

// Membership mask over transition indices of one NetSystem.
using TransitionMask = std::vector<bool>;

TransitionMask mask_of(const NetSystem& system, const std::vector<std::size_t>& transitions);
TransitionMask mask_of(const NetSystem& system, const std::vector<std::string>& transitions);

inline constexpr std::size_t kDefaultStateBudget = 1'000'000;

// Explicit marking graph. State 0 is the initial marking; states are numbered
// in breadth-first order with successors expanded by transition index.
class ReachabilityGraph {
 public:
  struct Edge {
    std::uint32_t from;
    std::uint32_t transition;
    std::uint32_t to;
  };

  // The target is [sink] where sink is the unique place without consumers.
  explicit ReachabilityGraph(const NetSystem& system, std::size_t budget = kDefaultStateBudget);
  ReachabilityGraph(const NetSystem& system, const Marking& target,
                    std::size_t budget = kDefaultStateBudget);

  std::size_t state_count() const { return states_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t transition_count() const { return transition_count_; }

  const Tokens& state(std::uint32_t s) const { return states_[s]; }
  std::uint32_t initial() const { return 0; }
  std::optional<std::uint32_t> final_state() const { return final_; }
  bool coreachable(std::uint32_t s) const { return coreachable_[s]; }

  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Edge> out_edges(std::uint32_t s) const {
    return {edges_.data() + offsets_[s], edges_.data() + offsets_[s + 1]};
  }

 private:
  void explore(const NetSystem& system, const Tokens& target, std::size_t budget);

  std::vector<Tokens> states_;
  std::vector<Edge> edges_;  // sorted by source state
  std::vector<std::size_t> offsets_;
  std::vector<bool> coreachable_;
  std::optional<std::uint32_t> final_;
  std::size_t transition_count_ = 0;
};

ReachabilityGraph build_graph(const NetSystem& system, std::size_t budget = kDefaultStateBudget);

// Set-based forms: a mask stands for "any transition in the set". They are
// what task-level predicates use after unification.
bool can_occur(const ReachabilityGraph& g, const TransitionMask& xs);
bool always_occurs(const ReachabilityGraph& g, const TransitionMask& xs);
bool can_cooccur(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys);
bool can_conflict(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys);
// No execution has a ys-firing followed by a later, distinct xs-firing.
bool total_causal(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys);

// Single-transition forms over transition ids.
bool can_occur_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t);
bool always_occurs_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t);
bool can_cooccur_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                   const std::string& t2);
bool can_conflict_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                    const std::string& t2);
bool total_causal_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                    const std::string& t2);

// Decisions through modified nets, used to cross-check the graph searches.
// can occur: a fresh marked place feeds a silent copy of t; [o] must be reachable.
// always occurs: a fresh marked place feeds t itself; [p',o] must be unreachable.
bool can_occur_by_construction(const NetSystem& system, const std::string& t,
                               std::size_t budget = kDefaultStateBudget);
bool always_occurs_by_construction(const NetSystem& system, const std::string& t,
                                   std::size_t budget = kDefaultStateBudget);

}  // namespace pql
