#pragma once

#include <set>
#include <string>
#include <vector>

#include "pql/error.hpp"
#include "pql/petri.hpp"
#include "pql/statespace.hpp"

namespace pql {

struct BoundednessResult {
  bool bounded = true;
  // Transition ids leading from the initial marking to a marking that strictly
  // dominates one of its ancestors. Empty when bounded.
  Execution witness;
};

struct SoundnessReport {
  bool bounded = false;
  Execution unbounded_witness;
  bool option_to_complete = false;
  bool proper_completion = false;
  std::set<std::string> dead_transitions;
  bool sound = false;
};

class UnboundedError : public Error {
 public:
  explicit UnboundedError(Execution witness);
  const Execution& witness() const { return witness_; }

 private:
  Execution witness_;
};

BoundednessResult check_bounded(const NetSystem& system, std::size_t budget = kDefaultStateBudget);

// Throws UnboundedError for unbounded nets and ModelError for nets that are
// not workflow-shaped.
SoundnessReport check_soundness(const NetSystem& system, std::size_t budget = kDefaultStateBudget);

}  // namespace pql
