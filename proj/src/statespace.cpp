#include "pql/statespace.hpp"

#include <deque>
#include <unordered_map>

#include "pql/error.hpp"

namespace pql {

TransitionMask mask_of(const NetSystem& system, const std::vector<std::size_t>& transitions) {
  TransitionMask m(system.transition_count(), false);
  for (auto t : transitions) m.at(t) = true;
  return m;
}

TransitionMask mask_of(const NetSystem& system, const std::vector<std::string>& transitions) {
  TransitionMask m(system.transition_count(), false);
  for (const auto& t : transitions) m[system.transition_index(t)] = true;
  return m;
}

ReachabilityGraph::ReachabilityGraph(const NetSystem& system, std::size_t budget) {
  Tokens target;
  if (auto o = sink_place(system)) {
    target.assign(system.place_count(), 0);
    target[*o] = 1;
  }
  explore(system, target, budget);
}

ReachabilityGraph::ReachabilityGraph(const NetSystem& system, const Marking& target,
                                     std::size_t budget) {
  explore(system, system.dense(target), budget);
}

void ReachabilityGraph::explore(const NetSystem& system, const Tokens& target, std::size_t budget) {
  transition_count_ = system.transition_count();
  std::unordered_map<Tokens, std::uint32_t, TokensHash> ids;
  auto intern = [&](Tokens&& m) -> std::uint32_t {
    auto [it, fresh] = ids.try_emplace(m, static_cast<std::uint32_t>(states_.size()));
    if (fresh) {
      if (states_.size() >= budget) throw BudgetExceeded();
      states_.push_back(std::move(m));
    }
    return it->second;
  };
  intern(system.dense(system.initial_marking()));
  offsets_.push_back(0);
  for (std::uint32_t s = 0; s < states_.size(); ++s) {
    for (std::uint32_t t = 0; t < transition_count_; ++t) {
      if (!system.enabled(states_[s], t)) continue;
      Tokens next = states_[s];
      system.fire(next, t);
      auto to = intern(std::move(next));
      edges_.push_back({s, t, to});
    }
    offsets_.push_back(edges_.size());
  }

  coreachable_.assign(states_.size(), false);
  if (target.empty()) return;
  auto it = ids.find(target);
  if (it == ids.end()) return;
  final_ = it->second;

  std::vector<std::vector<std::uint32_t>> back(states_.size());
  for (const auto& e : edges_) back[e.to].push_back(e.from);
  std::deque<std::uint32_t> todo{*final_};
  coreachable_[*final_] = true;
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop_front();
    for (auto p : back[s])
      if (!coreachable_[p]) coreachable_[p] = true, todo.push_back(p);
  }
}

ReachabilityGraph build_graph(const NetSystem& system, std::size_t budget) {
  return ReachabilityGraph(system, budget);
}

namespace {

void check_mask(const ReachabilityGraph& g, const TransitionMask& m) {
  if (m.size() != g.transition_count()) throw ModelError("transition mask does not match the net");
}

// Breadth-first search over (state, two flags). `step` maps the flags along
// an edge; returns nullopt to prune, or the new flags. Stops when `goal`
// holds for a visited pair.
template <class Step, class Goal>
bool flagged_search(const ReachabilityGraph& g, unsigned start_flags, Step step, Goal goal) {
  std::vector<std::uint8_t> seen(g.state_count(), 0);
  std::deque<std::pair<std::uint32_t, unsigned>> todo;
  auto visit = [&](std::uint32_t s, unsigned f) {
    if (seen[s] & (1u << f)) return false;
    seen[s] |= static_cast<std::uint8_t>(1u << f);
    todo.emplace_back(s, f);
    return goal(s, f);
  };
  if (visit(g.initial(), start_flags)) return true;
  while (!todo.empty()) {
    auto [s, f] = todo.front();
    todo.pop_front();
    for (const auto& e : g.out_edges(s)) {
      if (!g.coreachable(e.to)) continue;
      auto next = step(f, e);
      if (!next) continue;
      if (visit(e.to, *next)) return true;
    }
  }
  return false;
}

constexpr unsigned kSeenX = 1, kSeenY = 2;

}  // namespace

bool can_occur(const ReachabilityGraph& g, const TransitionMask& xs) {
  check_mask(g, xs);
  // Every state is reachable by construction, so only the target side matters.
  for (const auto& e : g.edges())
    if (xs[e.transition] && g.coreachable(e.to)) return true;
  return false;
}

bool always_occurs(const ReachabilityGraph& g, const TransitionMask& xs) {
  check_mask(g, xs);
  auto final = g.final_state();
  if (!final) return true;
  std::vector<bool> seen(g.state_count(), false);
  std::deque<std::uint32_t> todo{g.initial()};
  seen[g.initial()] = true;
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop_front();
    if (s == *final) return false;
    for (const auto& e : g.out_edges(s))
      if (!xs[e.transition] && !seen[e.to]) seen[e.to] = true, todo.push_back(e.to);
  }
  return true;
}

namespace {

bool reach_flags(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys,
                 unsigned wanted) {
  check_mask(g, xs);
  check_mask(g, ys);
  auto final = g.final_state();
  if (!final || !g.coreachable(g.initial())) return false;
  return flagged_search(
      g, 0,
      [&](unsigned f, const ReachabilityGraph::Edge& e) -> std::optional<unsigned> {
        if (xs[e.transition]) f |= kSeenX;
        if (ys[e.transition]) f |= kSeenY;
        // A y-flag can never be cleared, so such branches cannot reach (x, not y).
        if (!(wanted & kSeenY) && (f & kSeenY)) return std::nullopt;
        return f;
      },
      [&](std::uint32_t s, unsigned f) { return s == *final && f == wanted; });
}

}  // namespace

bool can_cooccur(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys) {
  return reach_flags(g, xs, ys, kSeenX | kSeenY);
}

bool can_conflict(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys) {
  return reach_flags(g, xs, ys, kSeenX);
}

bool total_causal(const ReachabilityGraph& g, const TransitionMask& xs, const TransitionMask& ys) {
  check_mask(g, xs);
  check_mask(g, ys);
  if (!g.final_state() || !g.coreachable(g.initial())) return true;
  // Search over (state, "a y-firing happened"). Only edges into co-reachable
  // states are followed, so an x-edge taken after a y-firing completes to an
  // execution that violates the relation.
  std::vector<std::uint8_t> seen(g.state_count(), 0);
  std::deque<std::pair<std::uint32_t, bool>> todo{{g.initial(), false}};
  seen[g.initial()] = 1;
  while (!todo.empty()) {
    auto [s, after_y] = todo.front();
    todo.pop_front();
    for (const auto& e : g.out_edges(s)) {
      if (!g.coreachable(e.to)) continue;
      if (after_y && xs[e.transition]) return false;
      bool next = after_y || ys[e.transition];
      std::uint8_t bit = next ? 2 : 1;
      if (!(seen[e.to] & bit)) seen[e.to] |= bit, todo.emplace_back(e.to, next);
    }
  }
  return true;
}

namespace {

TransitionMask single(const NetSystem& system, const std::string& t) {
  return mask_of(system, std::vector<std::string>{t});
}

}  // namespace

bool can_occur_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t) {
  return can_occur(g, single(system, t));
}

bool always_occurs_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t) {
  return always_occurs(g, single(system, t));
}

bool can_cooccur_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                   const std::string& t2) {
  return can_cooccur(g, single(system, t1), single(system, t2));
}

bool can_conflict_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                    const std::string& t2) {
  return can_conflict(g, single(system, t1), single(system, t2));
}

bool total_causal_t(const NetSystem& system, const ReachabilityGraph& g, const std::string& t1,
                    const std::string& t2) {
  if (t1 == t2) throw ModelError("total causality needs two distinct transitions");
  return total_causal(g, single(system, t1), single(system, t2));
}

bool can_occur_by_construction(const NetSystem& system, const std::string& t, std::size_t budget) {
  auto ti = system.transition_index(t);
  auto sink = sink_place(system);
  if (!sink) throw ModelError("net has no unique sink");
  NetBuilder b(system);
  auto guard = b.fresh_id("p'");
  b.place(guard, 1);
  auto copy = b.fresh_id(t + "'");
  b.transition(copy);
  b.arc(guard, copy);
  for (auto p : system.preset(ti)) b.arc(system.places()[p], copy);
  for (auto p : system.postset(ti)) b.arc(copy, system.places()[p]);
  auto extended = b.build();
  ReachabilityGraph g(extended, Marking{system.places()[*sink]}, budget);
  return g.final_state().has_value();
}

bool always_occurs_by_construction(const NetSystem& system, const std::string& t,
                                   std::size_t budget) {
  system.transition_index(t);
  auto sink = sink_place(system);
  if (!sink) throw ModelError("net has no unique sink");
  NetBuilder b(system);
  auto guard = b.fresh_id("p'");
  b.place(guard, 1);
  b.arc(guard, t);
  auto extended = b.build();
  ReachabilityGraph g(extended, Marking{guard, system.places()[*sink]}, budget);
  return !g.final_state().has_value();
}

}  // namespace pql
