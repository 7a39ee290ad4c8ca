#include "pql/unfolding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pql/error.hpp"

namespace pql {

namespace {

struct Candidate {
  std::size_t size;
  std::vector<std::size_t> parikh;  // sorted transition indices of the local configuration
  std::size_t transition;
  std::vector<std::size_t> preset;  // sorted condition ids
  std::vector<std::size_t> history; // local configuration without the new event

  bool operator<(const Candidate& o) const {
    if (size != o.size) return size < o.size;
    if (parikh != o.parikh) return parikh < o.parikh;
    if (transition != o.transition) return transition < o.transition;
    return preset < o.preset;
  }
};

}  // namespace

namespace detail {

class PrefixBuilder {
 public:
  PrefixBuilder(const NetSystem& system, std::size_t budget) : system_(system), budget_(budget) {}

  void run(Prefix& prefix) {
    for (std::size_t t = 0; t < system_.transition_count(); ++t)
      if (system_.preset(t).empty())
        throw ModelError("transition " + system_.transitions()[t] + " has no input places");
    prefix.place_count_ = system_.place_count();
    initial_ = system_.dense(system_.initial_marking());
    by_place_.assign(system_.place_count(), {});
    std::vector<std::size_t> created;
    for (std::size_t p = 0; p < system_.place_count(); ++p)
      for (std::uint32_t k = 0; k < initial_[p]; ++k) created.push_back(add_condition(prefix, p, std::nullopt));
    for (auto b : created) {
      prefix.initial_.push_back(b);
      for (auto c : created)
        if (c != b) co_[b].set(c);
    }
    for (auto b : created) extend(prefix, b);

    while (!queue_.empty()) {
      Candidate next = *queue_.begin();
      queue_.erase(queue_.begin());
      add_event(prefix, std::move(next));
    }
  }

 private:
  std::size_t add_condition(Prefix& prefix, std::size_t place, std::optional<std::size_t> producer) {
    auto id = prefix.conditions_.size();
    prefix.conditions_.push_back({place, producer, {}});
    by_place_[place].push_back(id);
    if (co_.size() <= id) {
      auto cap = std::max<std::size_t>(64, co_.size() * 2);
      for (auto& bits : co_) bits.resize(cap);
      co_.resize(cap, Prefix::Bits(cap));
      usable_.resize(cap, false);
    }
    usable_[id] = true;
    return id;
  }

  void add_event(Prefix& prefix, Candidate&& c) {
    if (prefix.events_.size() >= budget_) throw BudgetExceeded();
    auto id = prefix.events_.size();
    Prefix::Event e;
    e.transition = c.transition;
    e.preset = c.preset;
    e.local = std::move(c.history);
    e.local.push_back(id);

    Tokens mark = initial_;
    for (auto k : e.local) {
      auto t = k == id ? c.transition : prefix.events_[k].transition;
      system_.fire(mark, t);
    }
    e.mark = mark;
    if (mark == initial_) {
      e.cutoff = true;
    } else {
      auto it = first_.find(mark);
      if (it == first_.end()) {
        first_.emplace(mark, id);
      } else if (prefix.events_[it->second].local.size() < e.local.size()) {
        e.cutoff = true;
        e.corr = it->second;
      }
    }
    prefix.events_.push_back(std::move(e));
    for (auto b : c.preset) prefix.conditions_[b].consumers.push_back(id);

    // Conditions concurrent with every input are concurrent with every output.
    Prefix::Bits base = co_[c.preset.front()];
    for (auto b : c.preset) base &= co_[b];
    std::vector<std::size_t> post;
    for (auto p : system_.postset(c.transition)) post.push_back(add_condition(prefix, p, id));
    prefix.events_[id].postset = post;
    base.resize(co_.size());
    for (auto b : post) {
      co_[b] = base;
      for (auto other : post)
        if (other != b) co_[b].set(other);
      for (auto k = co_[b].find_first(); k != Prefix::Bits::npos; k = co_[b].find_next(k)) co_[k].set(b);
    }
    if (prefix.events_[id].cutoff) {
      for (auto b : post) usable_[b] = false;
      return;
    }
    for (auto b : post) extend(prefix, b);
  }

  // Queues every extension whose preset contains b and otherwise only older conditions.
  void extend(Prefix& prefix, std::size_t b) {
    const auto place = prefix.conditions_[b].place;
    for (auto t : system_.consumers(place)) {
      const auto& pre = system_.preset(t);
      std::vector<std::vector<std::size_t>> options;
      for (auto q : pre) {
        if (q == place) {
          options.push_back({b});
          continue;
        }
        std::vector<std::size_t> opts;
        for (auto c : by_place_[q])
          if (c < b && usable_[c] && co_[b].test(c)) opts.push_back(c);
        if (opts.empty()) break;
        options.push_back(std::move(opts));
      }
      if (options.size() != pre.size()) continue;
      std::vector<std::size_t> chosen;
      choose(prefix, t, options, chosen);
    }
  }

  void choose(Prefix& prefix, std::size_t t, const std::vector<std::vector<std::size_t>>& options,
              std::vector<std::size_t>& chosen) {
    if (chosen.size() == options.size()) {
      queue(prefix, t, chosen);
      return;
    }
    for (auto c : options[chosen.size()]) {
      bool ok = true;
      for (auto d : chosen)
        if (!co_[c].test(d)) ok = false;
      if (!ok) continue;
      chosen.push_back(c);
      choose(prefix, t, options, chosen);
      chosen.pop_back();
    }
  }

  void queue(Prefix& prefix, std::size_t t, std::vector<std::size_t> preset) {
    std::sort(preset.begin(), preset.end());
    std::set<std::size_t> history;
    for (auto b : preset)
      if (auto p = prefix.conditions_[b].producer) {
        const auto& l = prefix.events_[*p].local;
        history.insert(l.begin(), l.end());
      }
    Candidate c;
    c.history.assign(history.begin(), history.end());
    c.size = c.history.size() + 1;
    for (auto k : c.history) c.parikh.push_back(prefix.events_[k].transition);
    c.parikh.push_back(t);
    std::sort(c.parikh.begin(), c.parikh.end());
    c.transition = t;
    c.preset = std::move(preset);
    queue_.insert(std::move(c));
  }

  const NetSystem& system_;
  std::size_t budget_;
  Tokens initial_;
  std::vector<std::vector<std::size_t>> by_place_;
  std::vector<Prefix::Bits> co_;
  std::vector<bool> usable_;
  std::set<Candidate> queue_;
  std::unordered_map<Tokens, std::size_t, TokensHash> first_;
};

}  // namespace detail

Prefix build_prefix(const NetSystem& system, std::size_t budget) {
  Prefix prefix;
  detail::PrefixBuilder(system, budget).run(prefix);
  prefix.finish();
  return prefix;
}

void Prefix::finish() {
  const auto ne = events_.size(), nc = conditions_.size();
  event_events_.assign(ne, Bits(ne));
  event_conds_.assign(ne, Bits(nc));
  cond_events_.assign(nc, Bits(ne));
  cond_conds_.assign(nc, Bits(nc));
  for (std::size_t k = ne; k-- > 0;) {
    for (auto b : events_[k].postset) {
      for (auto e : conditions_[b].consumers) {
        cond_events_[b].set(e);
        cond_events_[b] |= event_events_[e];
        cond_conds_[b] |= event_conds_[e];
      }
      event_conds_[k].set(b);
      event_conds_[k] |= cond_conds_[b];
      event_events_[k] |= cond_events_[b];
    }
  }
  for (auto b : initial_) {
    for (auto e : conditions_[b].consumers) {
      cond_events_[b].set(e);
      cond_events_[b] |= event_events_[e];
      cond_conds_[b] |= event_conds_[e];
    }
  }

  cutoff_list_ = cutoffs();
  const auto n = cutoff_list_.size();
  cutoff_cut_.assign(n, Bits(nc));
  corr_reach_events_.assign(n, Bits(ne));
  std::vector<Bits> corr_reach_conds(n, Bits(nc));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ev = events_[cutoff_list_[i]];
    for (auto b : cut(ev.local)) cutoff_cut_[i].set(b);
    auto corr_cut = ev.corr ? cut(events_[*ev.corr].local) : cut({});
    for (auto b : corr_cut) {
      corr_reach_conds[i].set(b);
      corr_reach_conds[i] |= cond_conds_[b];
      corr_reach_events_[i] |= cond_events_[b];
    }
  }
  jumps_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (corr_reach_conds[i].intersects(cutoff_cut_[j])) jumps_[i].push_back(j);
}

std::vector<std::size_t> Prefix::cutoffs() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < events_.size(); ++e)
    if (events_[e].cutoff) out.push_back(e);
  return out;
}

std::vector<std::size_t> Prefix::events_of(std::size_t transition) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < events_.size(); ++e)
    if (events_[e].transition == transition) out.push_back(e);
  return out;
}

void Prefix::check_event(std::size_t e) const {
  if (e >= events_.size()) throw ModelError("unknown event e" + std::to_string(e));
}

const std::vector<std::size_t>& Prefix::local_config(std::size_t e) const {
  check_event(e);
  return events_[e].local;
}

std::vector<std::size_t> Prefix::cut(const std::vector<std::size_t>& config) const {
  std::set<std::size_t> live(initial_.begin(), initial_.end());
  for (auto e : config) {
    check_event(e);
    live.insert(events_[e].postset.begin(), events_[e].postset.end());
  }
  for (auto e : config)
    for (auto b : events_[e].preset) live.erase(b);
  return {live.begin(), live.end()};
}

Tokens Prefix::cut_marking(const std::vector<std::size_t>& config) const {
  Tokens m(place_count_, 0);
  for (auto b : cut(config)) ++m[conditions_[b].place];
  return m;
}

Prefix::Bits Prefix::linked_events(std::size_t e1) const {
  // Cutoffs whose cut is reached from e1, closed under jumps; the result is
  // every event reachable from the cut of a reached cutoff's corr.
  Bits linked = event_events_[e1];
  std::vector<bool> seen(cutoff_list_.size(), false);
  std::deque<std::size_t> todo;
  for (std::size_t i = 0; i < cutoff_list_.size(); ++i)
    if (event_conds_[e1].intersects(cutoff_cut_[i])) seen[i] = true, todo.push_back(i);
  while (!todo.empty()) {
    auto i = todo.front();
    todo.pop_front();
    linked |= corr_reach_events_[i];
    for (auto j : jumps_[i])
      if (!seen[j]) seen[j] = true, todo.push_back(j);
  }
  return linked;
}

bool Prefix::path(std::size_t e1, std::size_t e2) const {
  check_event(e1);
  check_event(e2);
  if (event_events_[e1].test(e2) || event_events_[e2].test(e1)) return true;
  return linked_events(e1).test(e2);
}

std::string Prefix::dump(const NetSystem& system) const {
  std::ostringstream out;
  out << "prefix events " << events_.size() << " conditions " << conditions_.size() << " cutoffs "
      << cutoffs().size() << "\n";
  for (std::size_t b = 0; b < conditions_.size(); ++b) {
    out << "condition c" << b << " place " << system.places()[conditions_[b].place] << " from ";
    if (conditions_[b].producer) out << "e" << *conditions_[b].producer;
    else out << "-";
    out << "\n";
  }
  for (std::size_t e = 0; e < events_.size(); ++e) {
    const auto& ev = events_[e];
    out << "event e" << e << " transition " << system.transitions()[ev.transition] << " pre";
    for (auto b : ev.preset) out << " c" << b;
    out << " post";
    for (auto b : ev.postset) out << " c" << b;
    if (ev.cutoff) {
      out << " cutoff ";
      if (ev.corr) out << "e" << *ev.corr;
      else out << "initial";
    }
    out << "\n";
  }
  return out.str();
}

bool total_concurrent(const Prefix& prefix, const TransitionMask& xs, const TransitionMask& ys) {
  // path is followed in both orientations: a cutoff jump may link a ys-event
  // to a later xs-event just as well as the other way round.
  const auto& events = prefix.events();
  for (std::size_t e1 = 0; e1 < events.size(); ++e1) {
    bool in_x = xs.at(events[e1].transition), in_y = ys.at(events[e1].transition);
    if (!in_x && !in_y) continue;
    auto linked = prefix.linked_events(e1);
    linked |= prefix.event_events_[e1];
    // e1 itself shows up only through a jump: the transition recurs after itself.
    for (std::size_t e2 = 0; e2 < events.size(); ++e2) {
      if (!linked.test(e2)) continue;
      const auto t2 = events[e2].transition;
      if ((in_x && ys.at(t2)) || (in_y && xs.at(t2))) return false;
    }
  }
  return true;
}

bool total_concurrent_t(const NetSystem& system, const Prefix& prefix, const std::string& t1,
                        const std::string& t2) {
  if (t1 == t2) throw ModelError("total concurrency needs two distinct transitions");
  return total_concurrent(prefix, mask_of(system, std::vector<std::string>{t1}),
                          mask_of(system, std::vector<std::string>{t2}));
}

}  // namespace pql
