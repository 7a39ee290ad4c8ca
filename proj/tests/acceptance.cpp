// Acceptance run: one PASS/FAIL line per criterion A1..A11.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "pql/bench.hpp"
#include "pql/generate.hpp"
#include "pql/index.hpp"
#include "pql/oracle.hpp"
#include "pql/pnml.hpp"
#include "pql/query/evaluator.hpp"
#include "pql/query/parser.hpp"
#include "pql/relations.hpp"
#include "pql/statespace.hpp"
#include "pql/unfolding.hpp"
#include "tempdir.hpp"

using namespace pql;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int digits = 3) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << x;
  return o.str();
}

// Every transition gets its own label, so label and transition level agree.
NetSystem relabel_unique(const NetSystem& s) {
  NetBuilder b(s);
  for (const auto& t : s.transitions()) b.label(t, "L" + t);
  return b.build();
}

std::vector<NetSystem> acyclic_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GeneratorOptions o;
  o.max_transitions = 8;
  o.max_places = 10;
  std::vector<NetSystem> out;
  while (out.size() < n) {
    auto s = random_sound_net(rng, o);
    if (!s.cyclic()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<NetSystem> cyclic_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GeneratorOptions o;
  o.cyclic = true;
  std::vector<NetSystem> out;
  while (out.size() < n) {
    auto s = random_sound_net(rng, o);
    if (s.cyclic()) out.push_back(std::move(s));
  }
  return out;
}

std::string name_of(Predicate p) { return std::string(predicate_name(p)); }

// ---- A1 ----

Verdict a1() {
  Verdict v;
  auto t0 = Clock::now();
  ModelRelations r(fixtures::f5());
  auto bin = [&](Predicate p, const char* x, const char* y) { return r.binary(p, {x}, {y}); };
  v.expect(r.can_occur({"a1"}), "canOccur(a1)");
  v.expect(!r.always_occurs({"a1"}), "alwaysOccurs(a1) should be false");
  for (auto l : {"b", "c", "d", "e"}) v.expect(r.always_occurs({l}), std::string("alwaysOccurs(") + l + ")");
  v.expect(bin(Predicate::CanConflict, "b", "a1"), "canConflict(b,a1)");
  v.expect(bin(Predicate::CanCooccur, "b", "a1"), "canCooccur(b,a1)");
  v.expect(bin(Predicate::Conflict, "a1", "a2"), "conflict(a1,a2)");
  v.expect(bin(Predicate::Cooccur, "b", "e"), "cooccur(b,e)");
  v.expect(bin(Predicate::TotalCausal, "a1", "c"), "totalCausal(a1,c)");
  v.expect(bin(Predicate::TotalConcurrent, "c", "d"), "totalConcurrent(c,d)");
  v.expect(r.always_occurs({"a1", "a2"}), "alwaysOccurs({a1,a2})");
  double took = seconds_since(t0);
  v.expect(took < 1.0, "took " + fmt(took) + " s");
  v.detail = "13 facts on F5 in " + fmt(took * 1000, 1) + " ms";
  return v;
}

// ---- A2 and A3 ----

struct OracleStats {
  std::size_t nets = 0, checks = 0, causal_checks = 0, causal_t_checks = 0;
  std::vector<std::string> mismatches, causal_mismatches;
  double seconds = 0;
};

OracleStats oracle_run(const std::vector<NetSystem>& nets) {
  OracleStats st;
  auto t0 = Clock::now();
  for (std::size_t k = 0; k < nets.size(); ++k) {
    const auto& s = nets[k];
    ++st.nets;
    ModelRelations engine(s);
    auto labels = s.observable_labels();
    auto where = [&](Predicate p, const std::string& x, const std::string& y) {
      return "net " + std::to_string(k) + " " + name_of(p) + "(" + x + (y.empty() ? "" : "," + y) + ")";
    };
    for (const auto& x : labels) {
      for (auto p : {Predicate::CanOccur, Predicate::AlwaysOccurs}) {
        ++st.checks;
        if (engine.evaluate(p, {x}) != oracle::oracle_predicate(p, s, {x})) st.mismatches.push_back(where(p, x, ""));
      }
      for (const auto& y : labels) {
        Task ty{y};
        for (auto p : kBinaryPredicates) {
          bool mine = engine.evaluate(p, {x}, &ty);
          bool ref = oracle::oracle_predicate(p, s, {x}, &ty);
          ++st.checks;
          if (mine != ref) st.mismatches.push_back(where(p, x, y));
          if (p == Predicate::TotalCausal) {
            ++st.causal_checks;
            if (mine != ref) st.causal_mismatches.push_back(where(p, x, y));
          }
        }
      }
    }
    // Transition level: the flagged search against process-level causality.
    auto u = relabel_unique(s);
    auto g = build_graph(u);
    auto procs = oracle::enumerate_processes(u);
    for (const auto& t1 : u.transitions())
      for (const auto& t2 : u.transitions()) {
        if (t1 == t2) continue;
        ++st.causal_t_checks;
        bool ref = oracle::label_predicate(Predicate::TotalCausal, u, procs, {u.label(t1)}, {u.label(t2)});
        if (total_causal_t(u, g, t1, t2) != ref)
          st.causal_mismatches.push_back("net " + std::to_string(k) + " total_causal_t(" + t1 + "," + t2 + ")");
      }
  }
  st.seconds = seconds_since(t0);
  return st;
}

Verdict a2(const OracleStats& st) {
  Verdict v;
  for (const auto& m : st.mismatches) v.expect(false, m);
  v.expect(st.nets >= 200, "only " + std::to_string(st.nets) + " nets");
  v.expect(st.seconds < 60, "took " + fmt(st.seconds) + " s");
  v.detail = std::to_string(st.nets) + " acyclic nets, " + std::to_string(st.checks) + " predicate checks, " +
             std::to_string(st.mismatches.size()) + " mismatches, " + fmt(st.seconds, 1) + " s";
  return v;
}

Verdict a3(const OracleStats& st) {
  Verdict v;
  for (const auto& m : st.causal_mismatches) v.expect(false, m);
  v.detail = std::to_string(st.causal_checks) + " task-level and " + std::to_string(st.causal_t_checks) +
             " transition-level totalCausal checks, " + std::to_string(st.causal_mismatches.size()) + " mismatches";
  return v;
}

// ---- A4 ----

Verdict a4(const std::vector<NetSystem>& nets) {
  Verdict v;
  auto t0 = Clock::now();
  const std::size_t depth = 16;
  std::size_t witnesses = 0;
  for (std::size_t k = 0; k < nets.size(); ++k) {
    auto s = relabel_unique(nets[k]);
    ModelRelations engine(s);
    auto bounded = oracle::enumerate_processes_bounded(s, depth);
    // (x, y) -> what some bounded process shows
    std::set<std::pair<std::size_t, std::size_t>> together, before, concurrent;
    for (const auto& pi : bounded.processes) {
      for (std::size_t e = 0; e < pi.event_count(); ++e)
        for (std::size_t f = 0; f < pi.event_count(); ++f) {
          if (e == f) continue;
          auto te = pi.event_transition[e], tf = pi.event_transition[f];
          if (s.silent(te) || s.silent(tf)) continue;
          together.emplace(te, tf);
          if (pi.causal(e, f)) before.emplace(te, tf);
          if (pi.concurrent(e, f)) concurrent.emplace(te, tf);
        }
    }
    auto label = [&](std::size_t t) { return s.label(t); };
    auto where = [&](const char* what, std::size_t a, std::size_t b) {
      return "net " + std::to_string(k) + " " + what + "(" + label(a) + "," + label(b) + ")";
    };
    for (auto [a, b] : together) {
      Task x{label(a)}, y{label(b)};
      ++witnesses;
      v.expect(engine.evaluate(Predicate::CanCooccur, x, &y), where("canCooccur should be true", a, b));
    }
    for (auto [a, b] : before) {
      // an a-event causally before a b-event: a y-then-x witness for x=b, y=a
      Task x{label(b)}, y{label(a)};
      ++witnesses;
      v.expect(!engine.evaluate(Predicate::TotalCausal, x, &y), where("totalCausal should be false", b, a));
      v.expect(!engine.evaluate(Predicate::TotalConcurrent, x, &y), where("totalConcurrent should be false", b, a));
    }
    for (auto [a, b] : concurrent) {
      Task x{label(a)}, y{label(b)};
      ++witnesses;
      v.expect(!engine.evaluate(Predicate::TotalCausal, x, &y), where("totalCausal should be false", a, b));
      v.expect(engine.evaluate(Predicate::CanCooccur, x, &y), where("canCooccur should be true", a, b));
    }
  }
  double took = seconds_since(t0);
  v.expect(nets.size() >= 50, "only " + std::to_string(nets.size()) + " nets");
  v.expect(took < 120, "took " + fmt(took) + " s");
  v.detail = std::to_string(nets.size()) + " cyclic nets, depth " + std::to_string(depth) + ", " +
             std::to_string(witnesses) + " witnesses, " + fmt(took, 1) + " s";
  return v;
}

// ---- A5 ----

Verdict a5(const std::vector<NetSystem>& nets) {
  Verdict v;
  std::size_t checks = 0;
  for (std::size_t k = 0; k < nets.size(); ++k) {
    const auto& s = nets[k];
    auto g = build_graph(s);
    for (std::size_t i = 0; i < s.transition_count(); ++i) {
      const auto& t = s.transitions()[i];
      ++checks;
      v.expect(can_occur_t(s, g, t) == can_occur_by_construction(s, t), "net " + std::to_string(k) + " can occur " + t);
      if (s.silent(i)) continue;
      ++checks;
      v.expect(always_occurs_t(s, g, t) == always_occurs_by_construction(s, t),
               "net " + std::to_string(k) + " always occurs " + t);
    }
  }
  v.detail = std::to_string(nets.size()) + " nets, " + std::to_string(checks) + " transition checks";
  return v;
}

// ---- A6 ----

Verdict a6() {
  Verdict v;
  auto s = fixtures::f_loop();
  auto prefix = build_prefix(s);
  auto g = build_graph(s);
  std::set<Tokens> reachable;
  for (std::uint32_t i = 0; i < g.state_count(); ++i) reachable.insert(g.state(i));
  auto initial = prefix.cut_marking({});
  auto cutoffs = prefix.cutoffs();
  v.expect(!cutoffs.empty(), "no cutoff");
  for (auto e : cutoffs) {
    const auto& ev = prefix.events()[e];
    const auto& corr_mark = ev.corr ? prefix.events()[*ev.corr].mark : initial;
    v.expect(ev.mark == corr_mark, "cutoff " + std::to_string(e) + " marking differs from its corr");
  }
  std::size_t marks = 0;
  for (std::size_t e = 0; e < prefix.events().size(); ++e) {
    ++marks;
    v.expect(prefix.cut_marking(prefix.local_config(e)) == prefix.events()[e].mark, "event mark/cut disagree");
    v.expect(reachable.count(prefix.events()[e].mark) > 0, "cut marking of event " + std::to_string(e) + " unreachable");
  }
  v.expect(reachable.count(initial) > 0, "initial cut unreachable");
  v.detail = std::to_string(prefix.events().size()) + " events, " + std::to_string(cutoffs.size()) + " cutoff(s), " +
             std::to_string(marks) + " cut markings within " + std::to_string(g.state_count()) + " reachable";
  return v;
}

// ---- A7 ----

std::vector<std::string> template_instances(std::size_t per_template, std::uint64_t seed,
                                            const std::vector<std::string>& labels) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (const auto& t : bench::load_templates(PQL_DATA_DIR "/templates"))
    for (std::size_t k = 0; k < per_template; ++k) out.push_back(bench::instantiate(t.text, labels, rng));
  return out;
}

Repository one_model_repo() {
  Repository repo;
  ModelRecord rec;
  rec.id = "F5";
  repo.add(rec, fixtures::f5());
  return repo;
}

bool holds(const Repository& repo, const std::string& where) {
  PredicateEngine engine(repo, nullptr);
  auto r = query::evaluate(query::parse("SELECT * FROM * WHERE " + where + ";"), repo, engine);
  if (!r.errors.empty()) throw Error(r.errors.begin()->second);
  return !r.rows.empty();
}

Verdict a7() {
  Verdict v;
  std::size_t parsed = 0;
  auto roundtrip = [&](const std::string& text) {
    try {
      auto q = query::parse(text);
      auto again = query::parse(query::pretty_print(q));
      v.expect(again == q, "round trip changed: " + text);
      v.expect(query::pretty_print(again) == query::pretty_print(q), "printing not idempotent: " + text);
      ++parsed;
    } catch (const std::exception& e) {
      v.expect(false, std::string(e.what()) + " in " + text);
    }
  };
  for (auto q : kSampleQueries) roundtrip(q);

  auto all = bench::load_templates(PQL_DATA_DIR "/templates");
  std::set<std::string> codes;
  for (const auto& t : all) codes.insert(t.code);
  v.expect(codes.size() == 15, std::to_string(codes.size()) + " subgroups");
  std::mt19937_64 rng(7);
  std::vector<std::string> labels{"A", "B", "C", "D", "E", "F", "check \"stock\""};
  std::size_t instances = 0;
  for (const auto& code : codes) {
    std::vector<bench::Template> group;
    for (const auto& t : all)
      if (t.code == code) group.push_back(t);
    for (int k = 0; k < 3; ++k) {
      const auto& t = group[rng() % group.size()];
      roundtrip(bench::instantiate(t.text, labels, rng));
      ++instances;
    }
  }

  auto repo = one_model_repo();
  try {
    // Set operators: A ∪ (B ∩ (C \ ((D ∪ E) \ F))) = {1,2}; left-to-right would give {2}.
    const std::string sets = R"({"1"} UNION {"2","3"} INTERSECT {"2","3","4"} EXCEPT ({"3"} UNION {"4"}) EXCEPT {"4"})";
    v.expect(holds(repo, sets + R"( EQUALS {"1","2"})"), "set precedence grouping");
    v.expect(!holds(repo, sets + R"( EQUALS {"2"})"), "set precedence left-to-right reading");
    // Logic: (¬(a∨(b∧c)))∨(d∧e) with a=F b=T c=F d=T e=F is true; ((¬…)∨d)∧e would be false.
    v.expect(holds(repo, "NOT (FALSE OR TRUE AND FALSE) OR TRUE AND FALSE"), "logic precedence grouping");
  } catch (const std::exception& e) {
    v.expect(false, e.what());
  }
  v.detail = std::to_string(parsed) + " queries round-tripped (10 samples, " + std::to_string(instances) +
             " template instances over " + std::to_string(codes.size()) + " subgroups), precedence examples checked";
  return v;
}

// ---- A8 ----

std::string quote(const std::string& l) { return "\"" + l + "\""; }

std::string literal(const std::vector<std::string>& ls) {
  std::string out = "{";
  for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? "," : "") + quote(ls[i]);
  return out + "}";
}

std::string join(const std::vector<std::string>& parts, const std::string& op) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " + op + " " : "") + parts[i];
  return out + ")";
}

Verdict a8() {
  Verdict v;
  std::mt19937_64 rng(2024);
  GeneratorOptions small;
  small.max_transitions = 5;
  small.max_places = 7;
  small.alphabet = {"a", "b", "c", "d"};
  const std::vector<std::string> pool{"a", "b", "c", "d", "z"};
  const char* quantifiers[] = {"ANY", "SOME", "EACH", "ALL"};

  auto pick = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::string> ls = pool;
    std::shuffle(ls.begin(), ls.end(), rng);
    ls.resize(lo + rng() % (hi - lo + 1));
    return ls;
  };
  auto ids = [&](const Repository& repo, const PredicateEngine& engine, const std::string& text) {
    auto r = query::evaluate(query::parse(text), repo, engine);
    if (!r.errors.empty()) throw Error(r.errors.begin()->second);
    return r.ids();
  };

  std::size_t cases = 0;
  std::map<std::string, std::size_t> by_law;
  try {
    for (int round = 0; round < 60; ++round) {
      Repository repo;
      std::size_t models = 1 + rng() % 3;
      for (std::size_t m = 0; m < models; ++m) {
        ModelRecord rec;
        rec.id = "m" + std::to_string(m);
        repo.add(rec, random_sound_net(rng, small));
      }
      PredicateEngine engine(repo, nullptr);
      auto same = [&](const std::string& law, const std::string& w1, const std::string& w2) {
        ++cases;
        ++by_law[law];
        auto r1 = ids(repo, engine, "SELECT * FROM * WHERE " + w1 + ";");
        auto r2 = ids(repo, engine, "SELECT * FROM * WHERE " + w2 + ";");
        v.expect(r1 == r2, law + ": " + w1 + " vs " + w2);
      };

      // Macro/atomic coherence, all quantifiers and binary predicates.
      for (auto p : kBinaryPredicates) {
        auto xs = pick(1, 3), ys = pick(1, 3);
        auto name = name_of(p);
        for (auto qn : quantifiers) {
          std::string q = qn;
          std::vector<std::string> outer;
          for (const auto& x : xs) {
            std::vector<std::string> inner;
            for (const auto& y : ys) inner.push_back(name + "(" + quote(x) + "," + quote(y) + ")");
            bool every_y = q == "SOME" || q == "ALL";
            outer.push_back(join(inner, every_y ? "AND" : "OR"));
          }
          bool every_x = q == "EACH" || q == "ALL";
          same("macro " + name + " " + q, name + "(" + literal(xs) + "," + literal(ys) + "," + q + ")",
               join(outer, every_x ? "AND" : "OR"));
        }
        // Task-set form and the construction agree with atomics too.
        auto x = xs[0];
        std::vector<std::string> any_y, all_y;
        for (const auto& y : ys) any_y.push_back(name + "(" + quote(x) + "," + quote(y) + ")");
        same("task-set " + name, name + "(" + quote(x) + "," + literal(ys) + ",ANY)", join(any_y, "OR"));
        same("task-set " + name, name + "(" + quote(x) + "," + literal(ys) + ",ALL)", join(any_y, "AND"));
        same("construction " + name, quote(x) + " IN GetTasks" + name + "(" + literal({x}) + "," + literal(ys) + ",ANY)",
             join(any_y, "OR"));
      }
      for (auto name : {"CanOccur", "AlwaysOccurs"}) {
        auto xs = pick(1, 3);
        std::vector<std::string> atoms;
        for (const auto& x : xs) atoms.push_back(std::string(name) + "(" + quote(x) + ")");
        same(std::string("unary macro ") + name, std::string(name) + "(" + literal(xs) + ",ANY)", join(atoms, "OR"));
        same(std::string("unary macro ") + name, std::string(name) + "(" + literal(xs) + ",ALL)", join(atoms, "AND"));
      }

      // Logical tests.
      auto a = pick(1, 1)[0], b = pick(1, 1)[0];
      std::string atom = "Cooccur(" + quote(a) + "," + quote(b) + ")";
      same("IS TRUE", atom + " IS TRUE", atom);
      same("IS NOT TRUE", atom + " IS NOT TRUE", "NOT " + atom);
      same("IS FALSE", atom + " IS FALSE", "NOT " + atom);
      same("IS NOT FALSE", atom + " IS NOT FALSE", atom);

      // Variables: later declarations override, and see only earlier ones.
      {
        auto xs = pick(1, 2), ys = pick(1, 2);
        auto probe = pick(1, 1)[0];
        std::set<std::string> later(ys.begin(), ys.end()), both(xs.begin(), xs.end());
        both.insert(ys.begin(), ys.end());
        auto check_var = [&](const std::string& decls, const std::set<std::string>& expect) {
          ++cases;
          ++by_law["variables"];
          auto r = ids(repo, engine, decls + " SELECT * FROM * WHERE " + quote(probe) + " IN v;");
          bool member = expect.count(probe) > 0;
          v.expect(r.empty() != member, "variables: " + decls + " probe " + probe);
        };
        check_var("v = " + literal(xs) + "; v = " + literal(ys) + ";", later);
        check_var("v = " + literal(xs) + "; v = v UNION " + literal(ys) + ";", both);
        check_var("w = " + literal(xs) + "; v = w; w = " + literal(ys) + ";",
                  std::set<std::string>(xs.begin(), xs.end()));
      }

      // Set comparisons against std::set.
      {
        auto xs = pick(0, 3), ys = pick(1, 3);
        std::set<std::string> X(xs.begin(), xs.end()), Y(ys.begin(), ys.end());
        bool subset = std::includes(Y.begin(), Y.end(), X.begin(), X.end());
        bool overlap = std::any_of(X.begin(), X.end(), [&](const std::string& l) { return Y.count(l) > 0; });
        auto lhs = xs.empty() ? std::string("(GetTasks() EXCEPT GetTasks())") : literal(xs);
        auto rhs = literal(ys);
        auto expect = [&](const std::string& what, bool truth) {
          same("set comparison " + what, lhs + " " + what + " " + rhs, truth ? "TRUE" : "FALSE");
        };
        expect("EQUALS", X == Y);
        expect("NOT EQUALS", X != Y);
        expect("OVERLAPS WITH", overlap);
        expect("IS SUBSET OF", subset);
        expect("IS PROPER SUBSET OF", subset && X.size() < Y.size());
      }
    }
  } catch (const std::exception& e) {
    v.expect(false, e.what());
  }
  v.expect(cases >= 1000, "only " + std::to_string(cases) + " cases");
  v.detail = std::to_string(cases) + " generated cases over " + std::to_string(by_law.size()) + " laws";
  return v;
}

// ---- A9 ----

Verdict a9() {
  Verdict v;
  TempDir dir;
  Store store(dir.path / "store");
  bench::CollectionOptions co;
  co.models = 16;
  co.seed = 9;
  co.generator.alphabet = {"check stock", "check stocks", "ship goods", "ship good",
                           "send invoice", "send invoices", "archive", "approve order"};
  co.settings.thresholds = {1.0, 0.75};
  bench::build_collection(store, co);
  auto repo = Repository::from_store(store);
  auto index = RelationIndex::load(store);
  PredicateEngine indexed(repo, &index), fresh(repo, nullptr);

  std::vector<std::string> labels(repo.vocabulary().begin(), repo.vocabulary().end());
  std::vector<std::string> corpus;
  for (auto q : kSampleQueries) corpus.emplace_back(q);
  for (auto& q : template_instances(1, 5, labels)) corpus.push_back(std::move(q));
  // Similarity variants of the atomic templates.
  for (const auto& l : labels)
    for (auto p : {"CanOccur", "AlwaysOccurs"}) {
      corpus.push_back(std::string("SELECT * FROM * WHERE ") + p + "(" + quote(l) + "[0.75]);");
      corpus.push_back(std::string("SELECT * FROM * WHERE ") + p + "(~" + quote(l) + ");");
    }

  std::size_t equal = 0, supersets = 0;
  try {
    for (const auto& text : corpus) {
      auto q = query::parse(text);
      auto a = query::evaluate(q, repo, indexed);
      auto b = query::evaluate(q, repo, fresh);
      bool same = a.ids() == b.ids() && a.errors == b.errors;
      v.expect(same, "indexed and fresh differ: " + text);
      equal += same;
    }
    for (const auto& l : labels)
      for (auto p : {"CanOccur", "AlwaysOccurs"}) {
        auto exact = query::evaluate(query::parse(std::string("SELECT * FROM * WHERE ") + p + "(" + quote(l) + "[1.0]);"),
                                     repo, indexed);
        auto wide = query::evaluate(query::parse(std::string("SELECT * FROM * WHERE ") + p + "(" + quote(l) + "[0.75]);"),
                                    repo, indexed);
        auto e = exact.ids(), w = wide.ids();
        bool sup = std::includes(w.begin(), w.end(), e.begin(), e.end());
        v.expect(sup, std::string("θ=0.75 not a superset for ") + p + "(" + l + ")");
        supersets += sup;
      }
  } catch (const std::exception& e) {
    v.expect(false, e.what());
  }
  v.detail = std::to_string(equal) + "/" + std::to_string(corpus.size()) + " corpus queries identical with and without the index (" +
             std::to_string(indexed.hits()) + " index hits), " + std::to_string(supersets) + " superset checks";
  return v;
}

// ---- A10 ----

Verdict a10(std::string& sub_a, std::string& sub_b, std::string& sub_c) {
  Verdict v;
  auto t0 = Clock::now();
  auto templates = bench::select_templates(bench::load_templates(PQL_DATA_DIR "/templates"), "1");

  TempDir dir;
  Store store(dir.path / "store");
  bench::CollectionOptions co;
  co.models = 100;
  co.seed = 10;
  co.settings.thresholds = {1.0};
  auto ids = bench::build_collection(store, co);
  auto repo = Repository::from_store(store);
  auto index = RelationIndex::load(store);

  bench::Options o;
  o.instances = 3;
  o.repeats = 7;
  o.seed = 3;

  // (a) query time against collection size.
  std::vector<double> xs, ys;
  for (std::size_t n : {25, 50, 75, 100}) {
    auto part = bench::subset(repo, std::vector<std::string>(ids.begin(), ids.begin() + n));
    auto r = bench::run(part, &index, templates, o);
    xs.push_back(static_cast<double>(n));
    ys.push_back(r.mean_query_seconds());
  }
  auto fit = bench::fit_line(xs, ys);
  bool ok_a = fit.r2 >= 0.9;
  sub_a = "(a) R^2=" + fmt(fit.r2, 4) + " over 25/50/75/100 models";
  v.expect(ok_a, "(a) R^2 " + fmt(fit.r2, 4) + " < 0.9");

  // (b) 4 threads against 1 on the full collection. Indexed Category-1
  // queries take microseconds, less than starting the workers, so this
  // compares index-bypassed evaluation where each model check does real work.
  o.repeats = 1;
  auto one = bench::run(repo, nullptr, templates, o);
  o.threads = 4;
  auto four = bench::run(repo, nullptr, templates, o);
  o.threads = 1;
  double ratio = four.mean_query_seconds() / one.mean_query_seconds();
  sub_b = "(b) 4 threads / 1 thread = " + fmt(ratio, 3) + " with " +
          std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hardware thread(s)";
  v.expect(ratio <= 0.6, "(b) ratio " + fmt(ratio, 3) + " > 0.6");

  // (c) per-model indexed Category-1 check on larger nets.
  Store big(dir.path / "big");
  bench::CollectionOptions cb;
  cb.models = 16;
  cb.seed = 11;
  cb.generator.max_transitions = 20;
  cb.generator.max_places = 24;
  cb.generator.alphabet.clear();
  for (int i = 0; i < 20; ++i) cb.generator.alphabet.push_back("task " + std::to_string(i));
  cb.settings.thresholds = {1.0};
  bench::build_collection(big, cb);
  auto big_repo = Repository::from_store(big);
  auto big_index = RelationIndex::load(big);
  std::size_t max_observable = 0;
  for (const auto& id : big_repo.ids()) {
    const auto& s = big_repo.system(id);
    std::size_t obs = 0;
    for (std::size_t t = 0; t < s.transition_count(); ++t) obs += !s.silent(t);
    max_observable = std::max(max_observable, obs);
  }
  o.repeats = 3;
  auto c = bench::run(big_repo, &big_index, templates, o);
  double check_ms = c.mean_check_seconds() * 1000;
  sub_c = "(c) " + fmt(check_ms, 4) + " ms per model-query check, nets up to " + std::to_string(max_observable) +
          " observable transitions";
  v.expect(max_observable <= 20, "(c) nets too large");
  v.expect(check_ms <= 50, "(c) " + fmt(check_ms, 3) + " ms > 50 ms");

  double took = seconds_since(t0);
  v.expect(took < 600, "took " + fmt(took) + " s");
  v.detail = sub_a + "; " + sub_b + "; " + sub_c + "; " + fmt(took, 1) + " s";
  return v;
}

// ---- A11 ----

Verdict a11() {
  Verdict v;
  TempDir dir;
  Store store(dir.path / "store");
  std::mt19937_64 rng(12);
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) {
    auto id = "q" + std::to_string(i);
    store.store_model(id, write_pnml(random_sound_net(rng), id));
    ids.push_back(id);
  }
  const std::string starved = "q4";

  std::mutex mu;
  std::map<std::string, int> claims;
  std::map<std::string, std::set<std::string>> claimed_by;
  auto make = [&](const std::string& name) {
    BotOptions o;
    o.name = name;
    o.sleep_seconds = 0;
    o.exit_when_idle = true;
    o.settings.thresholds = {1.0};
    o.before_index = [&, name](const std::string& id) {
      {
        std::lock_guard lock(mu);
        ++claims[id];
        claimed_by[id].insert(name);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));  // widen the race window
    };
    o.max_seconds_for = [&](const std::string& id) -> std::optional<double> {
      if (id == starved) return 0.0;
      return std::nullopt;
    };
    return o;
  };
  std::thread b1([&] { run_bot(store, make("bot-1")); });
  std::thread b2([&] { run_bot(store, make("bot-2")); });
  b1.join();
  b2.join();

  auto catalog = store.load();
  std::size_t indexed = 0;
  for (const auto& id : ids) {
    v.expect(claims[id] == 1, id + " claimed " + std::to_string(claims[id]) + " times");
    const auto* m = catalog.find(id);
    if (!m) {
      v.expect(false, id + " missing");
      continue;
    }
    if (id == starved) {
      v.expect(m->status == ModelStatus::CannotIndex, id + " should be cannot-index");
      v.expect(m->reason == "time budget exceeded", id + " reason: " + m->reason);
    } else {
      v.expect(m->status == ModelStatus::Indexed, id + " not indexed");
      indexed += m->status == ModelStatus::Indexed;
    }
    v.expect(m->claimed_by.empty(), id + " still claimed");
  }
  auto index = RelationIndex::load(store);
  v.expect(!index.has_model(starved), "starved model has index records");
  std::set<std::string> bots;
  for (const auto& [id, names] : claimed_by) bots.insert(names.begin(), names.end());
  v.detail = std::to_string(indexed) + "/9 indexed once each, " + starved + " cannot-index (time budget), " +
             std::to_string(bots.size()) + " bot(s) took jobs";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only(argv + 1, argv + argc);
  auto wanted = [&](const std::string& id) { return only.empty() || only.count(id) > 0; };
  int failures = 0;
  auto report = [&](const std::string& id, const std::string& title, const std::function<Verdict()>& run) {
    if (!wanted(id)) return;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.problems.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %s  %s: %s\n", id.c_str(), v.pass ? "PASS" : "FAIL", title.c_str(), v.detail.c_str());
    for (const auto& p : v.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  };

  report("A1", "F5 predicate table", a1);
  std::vector<NetSystem> acyclic;
  OracleStats stats;
  if (wanted("A2") || wanted("A3") || wanted("A5")) acyclic = acyclic_corpus(200, 2);
  if (wanted("A2") || wanted("A3")) stats = oracle_run(acyclic);
  report("A2", "oracle equivalence (acyclic)", [&] { return a2(stats); });
  report("A3", "total-causal reformulation", [&] { return a3(stats); });
  std::vector<NetSystem> cyclic;
  if (wanted("A4") || wanted("A5")) cyclic = cyclic_corpus(50, 4);
  report("A4", "cyclic consistency", [&] { return a4(cyclic); });
  report("A5", "construction equivalence", [&] {
    std::vector<NetSystem> nets{fixtures::f5(), fixtures::f_loop(), fixtures::f5_dead(), fixtures::jump(),
                                fixtures::and_split()};
    nets.insert(nets.end(), acyclic.begin(), acyclic.end());
    nets.insert(nets.end(), cyclic.begin(), cyclic.end());
    return a5(nets);
  });
  report("A6", "unfolding structure", a6);
  report("A7", "parser corpus", a7);
  report("A8", "semantics laws", a8);
  report("A9", "index transparency", a9);
  std::string sa, sb, sc;
  report("A10", "performance trends", [&] { return a10(sa, sb, sc); });
  report("A11", "bot lifecycle", a11);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
