#pragma once

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pql/petri.hpp"
#include "pql/statespace.hpp"

namespace pql {

namespace detail {
class PrefixBuilder;
}

// Finite complete prefix of the branching-process unfolding (McMillan).
// Events are numbered in the order they were added, which is topological.
class Prefix {
 public:
  struct Condition {
    std::size_t place;
    std::optional<std::size_t> producer;  // none for initial conditions
    std::vector<std::size_t> consumers;
  };
  struct Event {
    std::size_t transition;
    std::vector<std::size_t> preset, postset;
    std::vector<std::size_t> local;  // local configuration, sorted event ids
    Tokens mark;                     // marking reached by the local configuration
    bool cutoff = false;
    std::optional<std::size_t> corr;  // for cutoffs; none means the empty configuration
  };

  const std::vector<Condition>& conditions() const { return conditions_; }
  const std::vector<Event>& events() const { return events_; }
  std::vector<std::size_t> cutoffs() const;
  std::vector<std::size_t> events_of(std::size_t transition) const;

  const std::vector<std::size_t>& local_config(std::size_t e) const;
  // Conditions produced by the configuration (or initial) and not consumed by it.
  std::vector<std::size_t> cut(const std::vector<std::size_t>& config) const;
  Tokens cut_marking(const std::vector<std::size_t>& config) const;

  // e1 and e2 are causally linked, directly or across cutoff jumps.
  bool path(std::size_t e1, std::size_t e2) const;

  std::string dump(const NetSystem& system) const;

 private:
  friend class detail::PrefixBuilder;
  friend Prefix build_prefix(const NetSystem&, std::size_t);
  friend bool total_concurrent(const Prefix&, const TransitionMask&, const TransitionMask&);

  using Bits = boost::dynamic_bitset<>;

  void finish();  // reachability tables and the cutoff-jump graph
  void check_event(std::size_t e) const;
  Bits linked_events(std::size_t e1) const;

  std::size_t place_count_ = 0;
  std::vector<Condition> conditions_;
  std::vector<Event> events_;
  std::vector<std::size_t> initial_;

  // Strict descendants along the flow relation.
  std::vector<Bits> event_events_, event_conds_;
  std::vector<Bits> cond_events_, cond_conds_;
  std::vector<std::size_t> cutoff_list_;
  std::vector<Bits> cutoff_cut_;        // Cut of the cutoff's local configuration
  std::vector<Bits> corr_reach_events_;  // events reachable from Cut of corr
  std::vector<std::vector<std::size_t>> jumps_;
};

Prefix build_prefix(const NetSystem& system, std::size_t budget = kDefaultStateBudget);

// True iff no xs-event and distinct ys-event are linked by `path`.
bool total_concurrent(const Prefix& prefix, const TransitionMask& xs, const TransitionMask& ys);
bool total_concurrent_t(const NetSystem& system, const Prefix& prefix, const std::string& t1,
                        const std::string& t2);

}  // namespace pql
