#include "pql/relations.hpp"

#include <algorithm>
#include <stdexcept>

#include "pql/error.hpp"

namespace pql {

void validate_task(const Task& task) {
  if (task.empty()) throw std::invalid_argument("empty task");
  for (const auto& l : task)
    if (l.empty()) throw std::invalid_argument("task with an empty label");
}

bool is_unary(Predicate p) { return p == Predicate::CanOccur || p == Predicate::AlwaysOccurs; }

bool is_symmetric(Predicate p) {
  return p == Predicate::Conflict || p == Predicate::Cooccur || p == Predicate::CanCooccur ||
         p == Predicate::TotalConcurrent;
}

std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::CanOccur: return "CanOccur";
    case Predicate::AlwaysOccurs: return "AlwaysOccurs";
    case Predicate::CanConflict: return "CanConflict";
    case Predicate::CanCooccur: return "CanCooccur";
    case Predicate::Conflict: return "Conflict";
    case Predicate::Cooccur: return "Cooccur";
    case Predicate::TotalCausal: return "TotalCausal";
    case Predicate::TotalConcurrent: return "TotalConcurrent";
  }
  return "?";
}

std::optional<Predicate> predicate_from_name(std::string_view name) {
  for (auto p : kAllPredicates)
    if (predicate_name(p) == name) return p;
  return std::nullopt;
}

namespace {

std::string fresh_label(const NetSystem& system) {
  // U+001F cannot appear in labels read from PNML text or PQL strings, so
  // this namespace never collides with the vocabulary.
  auto used = system.observable_labels();
  for (std::size_t k = 0;; ++k) {
    auto l = "\x1f" "task" + std::to_string(k);
    if (!used.count(l)) return l;
  }
}

}  // namespace

UnifiedSystem unify(const NetSystem& system, const Task& x) {
  validate_task(x);
  auto matches = system.transitions_labelled(x);
  if (matches.empty()) throw ModelError("no transition carries a label of the task");
  UnifiedSystem out;
  if (matches.size() == 1) {
    out.system = system;
    out.solitary = system.transitions()[matches.front()];
    return out;
  }
  NetBuilder b(system);
  auto hat_in = b.fresh_id("unify.p");
  b.place(hat_in);
  auto hat_out = b.fresh_id("unify.r");
  b.place(hat_out);
  auto solitary = b.fresh_id("unify.t");
  b.transition(solitary, fresh_label(system));
  b.arc(hat_in, solitary).arc(solitary, hat_out);
  for (auto t : matches) {
    const auto& id = system.transitions()[t];
    auto block = b.fresh_id("unify.block." + id);
    b.place(block);
    b.arc(block, id);
    auto tag = b.fresh_id("unify.q." + id);
    b.place(tag);
    auto in = b.fresh_id("unify.in." + id);
    b.transition(in);
    for (auto p : system.preset(t)) b.arc(system.places()[p], in);
    b.arc(in, hat_in).arc(in, tag);
    auto out_t = b.fresh_id("unify.out." + id);
    b.transition(out_t);
    b.arc(hat_out, out_t).arc(tag, out_t);
    for (auto p : system.postset(t)) b.arc(out_t, system.places()[p]);
    out.forbidden.insert(id);
  }
  out.system = b.build();
  out.solitary = solitary;
  out.changed = true;
  return out;
}

PairUnification unify_pair(const NetSystem& system, const Task& x, const Task& y) {
  validate_task(x);
  validate_task(y);
  Task only_x, only_y, both;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::inserter(only_x, only_x.end()));
  std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::inserter(only_y, only_y.end()));
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(both, both.end()));

  PairUnification out;
  out.system = system;
  auto apply = [&](const Task& cell, bool for_x, bool for_y) {
    if (cell.empty() || system.transitions_labelled(cell).empty()) return;
    auto u = unify(out.system, cell);
    out.changed = out.changed || u.changed;
    out.system = std::move(u.system);
    if (for_x) out.xs.push_back(u.solitary);
    if (for_y) out.ys.push_back(u.solitary);
  };
  apply(only_x, true, false);
  apply(only_y, false, true);
  apply(both, true, true);
  if (out.xs.empty() || out.ys.empty()) throw ModelError("no transition carries a label of the task");
  return out;
}

bool PairRelations::get(Predicate p) const {
  switch (p) {
    case Predicate::CanConflict: return can_conflict_xy;
    case Predicate::CanCooccur: return can_cooccur;
    case Predicate::Conflict: return conflict();
    case Predicate::Cooccur: return cooccur();
    case Predicate::TotalCausal: return total_causal_xy;
    case Predicate::TotalConcurrent: return total_concurrent;
    default: throw std::invalid_argument("not a binary predicate");
  }
}

ModelRelations::ModelRelations(NetSystem system, std::size_t budget)
    : system_(std::move(system)), budget_(budget), labels_(system_.observable_labels()) {}

Task ModelRelations::effective(const Task& x) const {
  Task out;
  std::set_intersection(x.begin(), x.end(), labels_.begin(), labels_.end(), std::inserter(out, out.end()));
  return out;
}

ModelRelations::Unified& ModelRelations::unified(const Task& x, const Task& y) {
  auto key = std::make_pair(x, y);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  if (cache_.size() > 256) cache_.clear();
  auto u = std::make_unique<Unified>();
  if (y.empty()) {
    auto r = unify(system_, x);
    u->system = std::move(r.system);
    u->xs = mask_of(u->system, std::vector<std::string>{r.solitary});
  } else {
    auto r = unify_pair(system_, x, y);
    u->system = std::move(r.system);
    u->xs = mask_of(u->system, r.xs);
    u->ys = mask_of(u->system, r.ys);
  }
  return *cache_.emplace(key, std::move(u)).first->second;
}

const ReachabilityGraph& ModelRelations::graph(Unified& u) {
  if (!u.graph) u.graph = std::make_unique<ReachabilityGraph>(u.system, budget_);
  return *u.graph;
}

const Prefix& ModelRelations::prefix(Unified& u) {
  if (!u.prefix) u.prefix = std::make_unique<Prefix>(build_prefix(u.system, budget_));
  return *u.prefix;
}

bool ModelRelations::can_occur(const Task& x) {
  validate_task(x);
  auto ex = effective(x);
  if (ex.empty()) return false;
  auto& u = unified(ex, {});
  return pql::can_occur(graph(u), u.xs);
}

bool ModelRelations::always_occurs(const Task& x) {
  validate_task(x);
  auto ex = effective(x);
  if (ex.empty()) return false;
  auto& u = unified(ex, {});
  return pql::always_occurs(graph(u), u.xs);
}

bool ModelRelations::binary(Predicate p, const Task& x, const Task& y) {
  if (is_unary(p)) throw std::invalid_argument("not a binary predicate");
  validate_task(x);
  validate_task(y);
  auto ex = effective(x), ey = effective(y);
  if (ex.empty() || ey.empty()) return false;
  // One unified system serves both orientations.
  bool swapped = ey < ex;
  auto& u = swapped ? unified(ey, ex) : unified(ex, ey);
  const auto& xs = swapped ? u.ys : u.xs;
  const auto& ys = swapped ? u.xs : u.ys;
  switch (p) {
    case Predicate::CanConflict: return pql::can_conflict(graph(u), xs, ys);
    case Predicate::CanCooccur: return pql::can_cooccur(graph(u), xs, ys);
    case Predicate::Conflict:
      return pql::can_conflict(graph(u), xs, ys) && pql::can_conflict(graph(u), ys, xs) &&
             !pql::can_cooccur(graph(u), xs, ys);
    case Predicate::Cooccur:
      return !pql::can_conflict(graph(u), xs, ys) && !pql::can_conflict(graph(u), ys, xs) &&
             pql::can_cooccur(graph(u), xs, ys);
    case Predicate::TotalCausal: return pql::total_causal(graph(u), xs, ys);
    case Predicate::TotalConcurrent: return pql::total_concurrent(prefix(u), xs, ys);
    default: break;
  }
  throw std::invalid_argument("not a binary predicate");
}

bool ModelRelations::evaluate(Predicate p, const Task& x, const Task* y) {
  if (p == Predicate::CanOccur) return can_occur(x);
  if (p == Predicate::AlwaysOccurs) return always_occurs(x);
  if (!y) throw std::invalid_argument("binary predicate needs two tasks");
  return binary(p, x, *y);
}

PairRelations ModelRelations::pair(const Task& x, const Task& y) {
  PairRelations r;
  r.can_conflict_xy = binary(Predicate::CanConflict, x, y);
  r.can_conflict_yx = binary(Predicate::CanConflict, y, x);
  r.can_cooccur = binary(Predicate::CanCooccur, x, y);
  r.total_causal_xy = binary(Predicate::TotalCausal, x, y);
  r.total_causal_yx = binary(Predicate::TotalCausal, y, x);
  r.total_concurrent = binary(Predicate::TotalConcurrent, x, y);
  return r;
}

bool can_occur(const NetSystem& s, const Task& x) { return ModelRelations(s).can_occur(x); }
bool always_occurs(const NetSystem& s, const Task& x) { return ModelRelations(s).always_occurs(x); }
bool can_conflict(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::CanConflict, x, y);
}
bool can_cooccur(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::CanCooccur, x, y);
}
bool conflict(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::Conflict, x, y);
}
bool cooccur(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::Cooccur, x, y);
}
bool total_causal(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::TotalCausal, x, y);
}
bool total_concurrent(const NetSystem& s, const Task& x, const Task& y) {
  return ModelRelations(s).binary(Predicate::TotalConcurrent, x, y);
}

}  // namespace pql
