#include "pql/soundness.hpp"

#include <unordered_set>

namespace pql {

namespace {

std::string describe(const Execution& w) {
  std::string s;
  for (const auto& t : w) s += (s.empty() ? "" : " ") + t;
  return s;
}

bool strictly_dominates(const Tokens& big, const Tokens& small) {
  bool larger = false;
  for (std::size_t p = 0; p < big.size(); ++p) {
    if (big[p] < small[p]) return false;
    if (big[p] > small[p]) larger = true;
  }
  return larger;
}

}  // namespace

UnboundedError::UnboundedError(Execution witness)
    : Error("net is unbounded; witness: " + describe(witness)), witness_(std::move(witness)) {}

BoundednessResult check_bounded(const NetSystem& system, std::size_t budget) {
  // Depth-first search with a global visited set. Any infinite branch of the
  // search tree contains a strictly growing pair of markings, so the search
  // either finishes (bounded) or finds one on the current stack.
  struct Frame {
    Tokens marking;
    std::size_t next = 0;
    std::size_t via = 0;  // transition that produced this marking
  };
  std::unordered_set<Tokens, TokensHash> visited;
  std::vector<Frame> stack;
  stack.push_back({system.dense(system.initial_marking()), 0, 0});
  visited.insert(stack.back().marking);
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.next == system.transition_count()) {
      stack.pop_back();
      continue;
    }
    auto t = top.next++;
    if (!system.enabled(top.marking, t)) continue;
    Tokens next = top.marking;
    system.fire(next, t);
    for (const auto& f : stack) {
      if (strictly_dominates(next, f.marking)) {
        BoundednessResult r;
        r.bounded = false;
        for (std::size_t k = 1; k < stack.size(); ++k) r.witness.push_back(system.transitions()[stack[k].via]);
        r.witness.push_back(system.transitions()[t]);
        return r;
      }
    }
    if (!visited.insert(next).second) continue;
    if (visited.size() > budget) throw BudgetExceeded();
    stack.push_back({std::move(next), 0, t});
  }
  return {};
}

SoundnessReport check_soundness(const NetSystem& system, std::size_t budget) {
  auto wf = is_workflow(system);
  if (!wf.ok) throw ModelError("not a workflow net: " + wf.violation);
  auto bounded = check_bounded(system, budget);
  if (!bounded.bounded) throw UnboundedError(bounded.witness);

  ReachabilityGraph g(system, budget);
  SoundnessReport r;
  r.bounded = true;
  r.option_to_complete = true;
  for (std::uint32_t s = 0; s < g.state_count(); ++s)
    if (!g.coreachable(s)) r.option_to_complete = false;

  const auto o = system.place_index(wf.sink);
  r.proper_completion = true;
  for (std::uint32_t s = 0; s < g.state_count(); ++s) {
    const auto& m = g.state(s);
    std::uint32_t total = 0;
    for (auto n : m) total += n;
    if (m[o] >= 1 && total > 1) r.proper_completion = false;
  }

  std::vector<bool> fired(system.transition_count(), false);
  for (const auto& e : g.edges()) fired[e.transition] = true;
  for (std::size_t t = 0; t < system.transition_count(); ++t)
    if (!fired[t]) r.dead_transitions.insert(system.transitions()[t]);

  r.sound = r.option_to_complete && r.proper_completion && r.dead_transitions.empty();
  return r;
}

}  // namespace pql
