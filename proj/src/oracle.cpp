#include "pql/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "pql/error.hpp"

namespace pql::oracle {

namespace {

Tokens target_of(const NetSystem& system) {
  auto sink = sink_place(system);
  if (!sink) throw ModelError("net has no unique sink place");
  Tokens t(system.place_count(), 0);
  t[*sink] = 1;
  return t;
}

// Unfolding without cutoffs, built lazily while configurations are explored.
class Explorer {
 public:
  Explorer(const NetSystem& system, std::size_t max_events)
      : system_(system), target_(target_of(system)), max_events_(max_events) {}

  BoundedProcesses run() {
    std::vector<std::size_t> cut;
    auto init = system_.dense(system_.initial_marking());
    for (std::size_t p = 0; p < init.size(); ++p)
      for (std::uint32_t k = 0; k < init[p]; ++k) cut.push_back(condition(kNone, p, k));
    std::sort(cut.begin(), cut.end());
    initial_ = cut;
    visit({}, cut);
    return std::move(out_);
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static constexpr std::size_t kConfigBudget = 2'000'000;

  std::size_t condition(std::size_t producer, std::size_t place, std::size_t copy) {
    auto key = std::make_tuple(producer, place, copy);
    auto [it, fresh] = cond_ids_.try_emplace(key, cond_place_.size());
    if (fresh) {
      cond_place_.push_back(place);
      cond_producer_.push_back(producer == kNone ? std::nullopt : std::optional(producer));
    }
    return it->second;
  }

  std::size_t event(std::size_t t, const std::vector<std::size_t>& pre) {
    auto [it, fresh] = event_ids_.try_emplace({t, pre}, ev_t_.size());
    if (fresh) {
      auto e = ev_t_.size();
      ev_t_.push_back(t);
      ev_pre_.push_back(pre);
      std::vector<std::size_t> post;
      for (auto p : system_.postset(t)) post.push_back(condition(e, p, 0));
      ev_post_.push_back(post);
    }
    return it->second;
  }

  Tokens marking(const std::vector<std::size_t>& cut) const {
    Tokens m(system_.place_count(), 0);
    for (auto b : cut) ++m[cond_place_[b]];
    return m;
  }

  void visit(const std::vector<std::size_t>& config, const std::vector<std::size_t>& cut) {
    if (!seen_.insert(config).second) return;
    if (seen_.size() > kConfigBudget) throw BudgetExceeded();
    if (marking(cut) == target_) out_.processes.push_back(process(config));
    for (std::size_t t = 0; t < system_.transition_count(); ++t) {
      const auto& pre = system_.preset(t);
      std::vector<std::vector<std::size_t>> options;
      bool possible = true;
      for (auto p : pre) {
        std::vector<std::size_t> o;
        for (auto b : cut)
          if (cond_place_[b] == p) o.push_back(b);
        if (o.empty()) {
          possible = false;
          break;
        }
        options.push_back(std::move(o));
      }
      if (!possible) continue;
      if (config.size() >= max_events_) {
        out_.complete = false;
        continue;
      }
      std::vector<std::size_t> choice(pre.size());
      std::function<void(std::size_t)> pick = [&](std::size_t i) {
        if (i == pre.size()) {
          auto sorted = choice;
          std::sort(sorted.begin(), sorted.end());
          auto e = event(t, sorted);
          auto next_config = config;
          next_config.insert(std::upper_bound(next_config.begin(), next_config.end(), e), e);
          std::vector<std::size_t> next_cut;
          std::set_difference(cut.begin(), cut.end(), sorted.begin(), sorted.end(), std::back_inserter(next_cut));
          auto post = ev_post_[e];  // copy: visit may grow the tables
          next_cut.insert(next_cut.end(), post.begin(), post.end());
          std::sort(next_cut.begin(), next_cut.end());
          visit(next_config, next_cut);
          return;
        }
        for (auto b : options[i]) {
          choice[i] = b;
          pick(i + 1);
        }
      };
      pick(0);
    }
  }

  ProcessNet process(const std::vector<std::size_t>& config) const {
    ProcessNet pi;
    std::map<std::size_t, std::size_t> cond_local, ev_local;
    auto local_cond = [&](std::size_t b) {
      auto [it, fresh] = cond_local.try_emplace(b, pi.cond_place.size());
      if (fresh) {
        pi.cond_place.push_back(cond_place_[b]);
        pi.cond_producer.push_back(std::nullopt);
      }
      return it->second;
    };
    for (auto b : initial_) local_cond(b);
    // Event ids are interned after their inputs' producers, so sorted order is topological.
    for (auto e : config) {
      auto le = pi.event_transition.size();
      ev_local[e] = le;
      pi.event_transition.push_back(ev_t_[e]);
      std::vector<std::size_t> pre, post;
      for (auto b : ev_pre_[e]) pre.push_back(local_cond(b));
      for (auto b : ev_post_[e]) {
        auto lb = local_cond(b);
        pi.cond_producer[lb] = le;
        post.push_back(lb);
      }
      pi.event_pre.push_back(pre);
      pi.event_post.push_back(post);
    }
    auto n = pi.event_transition.size();
    pi.causes.assign(n, std::vector<bool>(n, false));
    for (std::size_t f = 0; f < n; ++f)
      for (auto b : pi.event_pre[f])
        if (auto e = pi.cond_producer[b]) {
          pi.causes[*e][f] = true;
          for (std::size_t g = 0; g < n; ++g)
            if (pi.causes[g][*e]) pi.causes[g][f] = true;
        }
    return pi;
  }

  const NetSystem& system_;
  Tokens target_;
  std::size_t max_events_;
  std::vector<std::size_t> initial_;
  std::vector<std::size_t> cond_place_;
  std::vector<std::optional<std::size_t>> cond_producer_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> cond_ids_;
  std::vector<std::size_t> ev_t_;
  std::vector<std::vector<std::size_t>> ev_pre_, ev_post_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> event_ids_;
  std::set<std::vector<std::size_t>> seen_;
  BoundedProcesses out_;
};

bool has_label(const NetSystem& s, std::size_t t, const std::set<std::string>& labels) {
  return !s.silent(t) && labels.count(s.label(t));
}

bool interleaving(Predicate p, const std::vector<std::set<std::string>>& runs, const std::set<std::string>& xs,
                  const std::set<std::string>& ys) {
  auto hits = [](const std::set<std::string>& run, const std::set<std::string>& labels) {
    return std::any_of(labels.begin(), labels.end(), [&](const auto& l) { return run.count(l) > 0; });
  };
  auto exists = [&](auto f) { return std::any_of(runs.begin(), runs.end(), f); };
  auto can_conflict = [&](const auto& a, const auto& b) {
    return exists([&](const auto& r) { return hits(r, a) && !hits(r, b); });
  };
  auto can_cooccur = [&] { return exists([&](const auto& r) { return hits(r, xs) && hits(r, ys); }); };
  switch (p) {
    case Predicate::CanOccur: return exists([&](const auto& r) { return hits(r, xs); });
    case Predicate::AlwaysOccurs:
      return std::all_of(runs.begin(), runs.end(), [&](const auto& r) { return hits(r, xs); });
    case Predicate::CanConflict: return can_conflict(xs, ys);
    case Predicate::CanCooccur: return can_cooccur();
    case Predicate::Conflict: return can_conflict(xs, ys) && can_conflict(ys, xs) && !can_cooccur();
    case Predicate::Cooccur: return !can_conflict(xs, ys) && !can_conflict(ys, xs) && can_cooccur();
    default: throw std::invalid_argument("not an interleaving predicate");
  }
}

// Unified nets are structurally cyclic (every match routes through the shared
// hub) but their behaviour stays finite when the input is acyclic.
std::vector<ProcessNet> finite_processes(const NetSystem& system) {
  auto r = enumerate_processes_bounded(system, 4096);
  if (!r.complete) throw ModelError("process enumeration did not terminate");
  return std::move(r.processes);
}

std::set<std::string> labels_of(const NetSystem& s, const std::vector<std::string>& ids) {
  std::set<std::string> out;
  for (const auto& id : ids) out.insert(s.label(id));
  return out;
}

}  // namespace

Executions enumerate_executions(const NetSystem& system, std::size_t max_len) {
  Executions out;
  auto target = target_of(system);
  std::vector<std::size_t> path;
  std::function<void(Tokens&)> dfs = [&](Tokens& m) {
    if (m == target) out.runs.push_back(path);
    for (std::size_t t = 0; t < system.transition_count(); ++t) {
      if (!system.enabled(m, t)) continue;
      if (path.size() >= max_len) {
        out.complete = false;
        return;
      }
      Tokens next = m;
      system.fire(next, t);
      path.push_back(t);
      dfs(next);
      path.pop_back();
    }
  };
  auto m0 = system.dense(system.initial_marking());
  dfs(m0);
  return out;
}

std::vector<std::vector<std::size_t>> ProcessNet::linearizations() const {
  std::vector<std::vector<std::size_t>> out;
  auto n = event_count();
  std::vector<bool> done(n, false);
  std::vector<std::size_t> seq;
  std::function<void()> rec = [&] {
    if (seq.size() == n) {
      out.push_back(seq);
      return;
    }
    for (std::size_t e = 0; e < n; ++e) {
      if (done[e]) continue;
      bool ready = true;
      for (std::size_t f = 0; f < n && ready; ++f)
        if (!done[f] && causes[f][e]) ready = false;
      if (!ready) continue;
      done[e] = true;
      seq.push_back(event_transition[e]);
      rec();
      seq.pop_back();
      done[e] = false;
    }
  };
  rec();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ProcessNet> enumerate_processes(const NetSystem& system) {
  if (system.cyclic()) throw ModelError("process enumeration needs an acyclic net");
  return Explorer(system, static_cast<std::size_t>(-1)).run().processes;
}

BoundedProcesses enumerate_processes_bounded(const NetSystem& system, std::size_t max_events) {
  return Explorer(system, max_events).run();
}

bool label_predicate(Predicate p, const NetSystem& system, const std::vector<ProcessNet>& processes,
                     const std::set<std::string>& xs, const std::set<std::string>& ys) {
  if (p != Predicate::TotalCausal && p != Predicate::TotalConcurrent) {
    std::vector<std::set<std::string>> runs;
    for (const auto& pi : processes) {
      std::set<std::string> seen;
      for (auto t : pi.event_transition)
        if (!system.silent(t)) seen.insert(system.label(t));
      runs.push_back(std::move(seen));
    }
    return interleaving(p, runs, xs, ys);
  }
  for (const auto& pi : processes) {
    auto n = pi.event_count();
    for (std::size_t e1 = 0; e1 < n; ++e1) {
      if (!has_label(system, pi.event_transition[e1], xs)) continue;
      for (std::size_t e2 = 0; e2 < n; ++e2) {
        if (e1 == e2 || !has_label(system, pi.event_transition[e2], ys)) continue;
        bool ok = p == Predicate::TotalCausal ? pi.causal(e1, e2) : pi.concurrent(e1, e2);
        if (!ok) return false;
      }
    }
  }
  return true;
}

bool label_predicate_on_executions(Predicate p, const NetSystem& system, const Executions& runs,
                                   const std::set<std::string>& xs, const std::set<std::string>& ys) {
  std::vector<std::set<std::string>> sets;
  for (const auto& run : runs.runs) {
    std::set<std::string> seen;
    for (auto t : run)
      if (!system.silent(t)) seen.insert(system.label(t));
    sets.push_back(std::move(seen));
  }
  return interleaving(p, sets, xs, ys);
}

bool oracle_predicate(Predicate p, const NetSystem& system, const Task& x, const Task* y) {
  auto labels = system.observable_labels();
  auto restrict = [&](const Task& t) {
    Task out;
    for (const auto& l : t)
      if (labels.count(l)) out.insert(l);
    return out;
  };
  if (system.cyclic()) throw ModelError("process enumeration needs an acyclic net");
  auto ex = restrict(x);
  if (ex.empty()) return false;
  if (is_unary(p)) {
    auto u = unify(system, ex);
    return label_predicate(p, u.system, finite_processes(u.system), {u.system.label(u.solitary)}, {});
  }
  if (!y) throw std::invalid_argument("binary predicate needs two tasks");
  auto ey = restrict(*y);
  if (ey.empty()) return false;
  auto u = unify_pair(system, ex, ey);
  return label_predicate(p, u.system, finite_processes(u.system), labels_of(u.system, u.xs),
                         labels_of(u.system, u.ys));
}

bool direct_predicate(Predicate p, const NetSystem& system, const Task& x, const Task* y) {
  auto labels = system.observable_labels();
  auto restrict = [&](const Task& t) {
    Task out;
    for (const auto& l : t)
      if (labels.count(l)) out.insert(l);
    return out;
  };
  auto ex = restrict(x);
  auto ey = y ? restrict(*y) : Task{};
  if (ex.empty() || (!is_unary(p) && ey.empty())) return false;
  return label_predicate(p, system, finite_processes(system), ex, ey);
}

}  // namespace pql::oracle
