#include "pql/petri.hpp"

#include <algorithm>
#include <deque>

#include "pql/error.hpp"

namespace pql {

Marking::Marking(std::initializer_list<std::string> places) {
  for (const auto& p : places) add(p);
}

unsigned Marking::operator[](const std::string& place) const {
  auto it = counts_.find(place);
  return it == counts_.end() ? 0 : it->second;
}

void Marking::add(const std::string& place, unsigned n) {
  if (n > 0) counts_[place] += n;
}

Marking Marking::operator+(const Marking& other) const {
  Marking r = *this;
  for (const auto& [p, n] : other.counts_) r.add(p, n);
  return r;
}

Marking Marking::operator-(const Marking& other) const {
  Marking r;
  for (const auto& [p, n] : counts_) {
    unsigned m = other[p];
    if (n > m) r.counts_[p] = n - m;
  }
  return r;
}

std::size_t Marking::size() const {
  std::size_t n = 0;
  for (const auto& kv : counts_) n += kv.second;
  return n;
}

bool Marking::covers(const Marking& other) const {
  for (const auto& [p, n] : other.counts_)
    if ((*this)[p] < n) return false;
  return true;
}

std::string Marking::str() const {
  std::string s = "[";
  bool first = true;
  for (const auto& [p, n] : counts_) {
    if (!first) s += ",";
    first = false;
    s += p;
    if (n > 1) s += "^" + std::to_string(n);
  }
  return s + "]";
}

std::size_t TokensHash::operator()(const Tokens& t) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : t) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<std::size_t> NetSystem::find_place(std::string_view id) const {
  auto it = place_ids_.find(std::string(id));
  if (it == place_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> NetSystem::find_transition(std::string_view id) const {
  auto it = transition_ids_.find(std::string(id));
  if (it == transition_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t NetSystem::place_index(std::string_view id) const {
  if (auto p = find_place(id)) return *p;
  throw ModelError("unknown place: " + std::string(id));
}

std::size_t NetSystem::transition_index(std::string_view id) const {
  if (auto t = find_transition(id)) return *t;
  throw ModelError("unknown transition: " + std::string(id));
}

bool NetSystem::has_node(std::string_view id) const {
  return find_place(id).has_value() || find_transition(id).has_value();
}

std::vector<std::pair<std::string, std::string>> NetSystem::arcs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    for (auto p : pre_[t]) out.emplace_back(places_[p], transitions_[t]);
    for (auto p : post_[t]) out.emplace_back(transitions_[t], places_[p]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> NetSystem::observable_labels() const {
  std::set<std::string> out;
  for (const auto& l : labels_)
    if (!l.empty()) out.insert(l);
  return out;
}

std::vector<std::size_t> NetSystem::transitions_labelled(const std::set<std::string>& labels) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < labels_.size(); ++t)
    if (!labels_[t].empty() && labels.count(labels_[t])) out.push_back(t);
  return out;
}

Tokens NetSystem::dense(const Marking& m) const {
  Tokens out(places_.size(), 0);
  for (const auto& [p, n] : m.counts()) out[place_index(p)] = n;
  return out;
}

Marking NetSystem::sparse(const Tokens& t) const {
  Marking m;
  for (std::size_t p = 0; p < t.size(); ++p) m.add(places_[p], t[p]);
  return m;
}

bool NetSystem::enabled(const Tokens& m, std::size_t t) const {
  for (auto p : pre_[t])
    if (m[p] == 0) return false;
  return true;
}

void NetSystem::fire(Tokens& m, std::size_t t) const {
  for (auto p : pre_[t]) --m[p];
  for (auto p : post_[t]) ++m[p];
}

bool NetSystem::cyclic() const {
  // Kahn's algorithm over transitions; a place links producers to consumers.
  std::vector<std::size_t> indegree(transitions_.size(), 0);
  for (std::size_t t = 0; t < transitions_.size(); ++t)
    for (auto p : post_[t]) for (auto u : consumers_[p]) ++indegree[u];
  std::deque<std::size_t> ready;
  for (std::size_t t = 0; t < transitions_.size(); ++t)
    if (indegree[t] == 0) ready.push_back(t);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto t = ready.front();
    ready.pop_front();
    ++seen;
    for (auto p : post_[t])
      for (auto u : consumers_[p])
        if (--indegree[u] == 0) ready.push_back(u);
  }
  return seen != transitions_.size();
}

NetBuilder::NetBuilder(const NetSystem& system) {
  for (const auto& p : system.places()) places_[p] = system.initial_marking()[p];
  for (std::size_t t = 0; t < system.transition_count(); ++t)
    transitions_[system.transitions()[t]] = system.label(t);
  for (auto& a : system.arcs()) arcs_.insert(a);
}

NetBuilder& NetBuilder::place(const std::string& id, unsigned tokens) {
  if (transitions_.count(id)) throw ModelError("node id used twice: " + id);
  places_[id] = tokens;
  return *this;
}

NetBuilder& NetBuilder::transition(const std::string& id, const std::string& label) {
  if (places_.count(id)) throw ModelError("node id used twice: " + id);
  transitions_[id] = label;
  return *this;
}

NetBuilder& NetBuilder::arc(const std::string& from, const std::string& to) {
  arcs_.emplace(from, to);
  return *this;
}

NetBuilder& NetBuilder::remove_arc(const std::string& from, const std::string& to) {
  arcs_.erase({from, to});
  return *this;
}

NetBuilder& NetBuilder::tokens(const std::string& place, unsigned n) {
  auto it = places_.find(place);
  if (it == places_.end()) throw ModelError("unknown place: " + place);
  it->second = n;
  return *this;
}

NetBuilder& NetBuilder::label(const std::string& transition, const std::string& label) {
  auto it = transitions_.find(transition);
  if (it == transitions_.end()) throw ModelError("unknown transition: " + transition);
  it->second = label;
  return *this;
}

bool NetBuilder::has_node(const std::string& id) const {
  return places_.count(id) || transitions_.count(id);
}

std::string NetBuilder::fresh_id(const std::string& base) const {
  if (!has_node(base)) return base;
  for (std::size_t k = 1;; ++k) {
    auto id = base + "#" + std::to_string(k);
    if (!has_node(id)) return id;
  }
}

NetSystem NetBuilder::build() const {
  NetSystem s;
  for (const auto& [id, n] : places_) {
    if (id.empty()) throw ModelError("empty place id");
    s.place_ids_[id] = s.places_.size();
    s.places_.push_back(id);
    s.initial_.add(id, n);
  }
  for (const auto& [id, label] : transitions_) {
    if (id.empty()) throw ModelError("empty transition id");
    s.transition_ids_[id] = s.transitions_.size();
    s.transitions_.push_back(id);
    s.labels_.push_back(label);
  }
  s.pre_.assign(s.transitions_.size(), {});
  s.post_.assign(s.transitions_.size(), {});
  s.producers_.assign(s.places_.size(), {});
  s.consumers_.assign(s.places_.size(), {});
  for (const auto& [from, to] : arcs_) {
    auto fp = s.find_place(from), ft = s.find_transition(from);
    auto tp = s.find_place(to), tt = s.find_transition(to);
    if (fp && tt) {
      s.pre_[*tt].push_back(*fp);
      s.consumers_[*fp].push_back(*tt);
    } else if (ft && tp) {
      s.post_[*ft].push_back(*tp);
      s.producers_[*tp].push_back(*ft);
    } else {
      throw ModelError("arc " + from + " -> " + to + " does not join a place and a transition");
    }
  }
  for (auto* v : {&s.pre_, &s.post_, &s.producers_, &s.consumers_})
    for (auto& list : *v) std::sort(list.begin(), list.end());
  return s;
}

bool enabled(const NetSystem& system, const Marking& m, const std::string& t) {
  auto ti = system.transition_index(t);
  for (auto p : system.preset(ti))
    if (m[system.places()[p]] == 0) return false;
  return true;
}

Marking fire(const NetSystem& system, const Marking& m, const std::string& t) {
  if (!enabled(system, m, t)) throw ModelError("transition " + t + " is not enabled at " + m.str());
  auto ti = system.transition_index(t);
  Marking consumed, produced;
  for (auto p : system.preset(ti)) consumed.add(system.places()[p]);
  for (auto p : system.postset(ti)) produced.add(system.places()[p]);
  return (m - consumed) + produced;
}

std::optional<std::size_t> sink_place(const NetSystem& system) {
  std::optional<std::size_t> sink;
  for (std::size_t p = 0; p < system.place_count(); ++p) {
    if (!system.consumers(p).empty()) continue;
    if (sink) return std::nullopt;
    sink = p;
  }
  return sink;
}

WorkflowCheck is_workflow(const NetSystem& system) {
  WorkflowCheck r;
  std::vector<std::size_t> sources, sinks;
  for (std::size_t p = 0; p < system.place_count(); ++p) {
    if (system.producers(p).empty()) sources.push_back(p);
    if (system.consumers(p).empty()) sinks.push_back(p);
  }
  auto fail = [&r](std::string why) {
    r.violation = std::move(why);
    return r;
  };
  if (sources.empty()) return fail("no source place");
  if (sources.size() > 1) return fail("multiple sources");
  if (sinks.empty()) return fail("no sink place");
  if (sinks.size() > 1) return fail("multiple sinks");
  const auto i = sources.front(), o = sinks.front();
  r.source = system.places()[i];
  r.sink = system.places()[o];

  // Node numbering: places first, then transitions.
  const auto np = system.place_count(), nt = system.transition_count();
  auto walk = [&](std::size_t start, bool forward) {
    std::vector<char> seen(np + nt, 0);
    std::deque<std::size_t> todo{start};
    seen[start] = 1;
    while (!todo.empty()) {
      auto n = todo.front();
      todo.pop_front();
      std::vector<std::size_t> next;
      if (n < np) {
        for (auto t : forward ? system.consumers(n) : system.producers(n)) next.push_back(np + t);
      } else {
        for (auto p : forward ? system.postset(n - np) : system.preset(n - np)) next.push_back(p);
      }
      for (auto m : next)
        if (!seen[m]) seen[m] = 1, todo.push_back(m);
    }
    return seen;
  };
  auto from_source = walk(i, true);
  auto to_sink = walk(o, false);
  for (std::size_t n = 0; n < np + nt; ++n) {
    if (!from_source[n] || !to_sink[n]) {
      auto id = n < np ? system.places()[n] : system.transitions()[n - np];
      return fail("node " + id + " is not on a path from source to sink");
    }
  }
  if (system.initial_marking() != Marking{r.source}) return fail("marking not [" + r.source + "]");
  r.ok = true;
  return r;
}

std::vector<std::string> label_execution(const NetSystem& system, const Execution& e) {
  std::vector<std::string> out;
  for (const auto& t : e) {
    const auto& l = system.label(t);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

}  // namespace pql
