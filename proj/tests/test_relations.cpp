#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pql/error.hpp"
#include "pql/generate.hpp"
#include "pql/oracle.hpp"
#include "pql/relations.hpp"
#include "pql/soundness.hpp"

using namespace pql;

TEST_CASE("F5 predicate facts") {
  ModelRelations r(fixtures::f5());
  CHECK(r.can_occur({"a1"}));
  CHECK_FALSE(r.always_occurs({"a1"}));
  for (auto l : {"b", "c", "d", "e"}) CHECK(r.always_occurs({l}));
  CHECK(r.binary(Predicate::CanConflict, {"b"}, {"a1"}));
  CHECK(r.binary(Predicate::CanCooccur, {"b"}, {"a1"}));
  CHECK(r.binary(Predicate::Conflict, {"a1"}, {"a2"}));
  CHECK(r.binary(Predicate::Cooccur, {"b"}, {"e"}));
  CHECK(r.binary(Predicate::TotalCausal, {"a1"}, {"c"}));
  CHECK(r.binary(Predicate::TotalConcurrent, {"c"}, {"d"}));
  CHECK(r.always_occurs({"a1", "a2"}));
  CHECK_FALSE(r.binary(Predicate::Conflict, {"b"}, {"e"}));
}

TEST_CASE("unify") {
  auto s = fixtures::f5();
  auto same = unify(s, {"b"});
  CHECK_FALSE(same.changed);
  CHECK(same.solitary == "t_b");
  CHECK(same.system.arcs() == s.arcs());
  CHECK(unify(s, {"a1"}).solitary == "t_a1");

  auto u = unify(s, {"a1", "a2"});
  CHECK(u.changed);
  CHECK(u.forbidden == std::set<std::string>{"t_a1", "t_a2"});
  const auto& lbl = u.system.label(u.solitary);
  CHECK_FALSE(s.observable_labels().count(lbl));
  CHECK(u.system.transitions_labelled({lbl}).size() == 1);
  auto g = build_graph(u.system);
  CHECK(always_occurs_t(u.system, g, u.solitary));
  for (const auto& t : u.forbidden) CHECK_FALSE(can_occur_t(u.system, g, t));
  CHECK_THROWS_AS(unify(s, {"zz"}), ModelError);
  CHECK_THROWS_AS(unify(s, {}), std::invalid_argument);
  CHECK_THROWS_AS(unify(s, {""}), std::invalid_argument);
}

TEST_CASE("unmatched tasks give false") {
  ModelRelations r(fixtures::f5());
  CHECK_FALSE(r.can_occur({"zz"}));
  CHECK_FALSE(r.always_occurs({"zz"}));
  for (auto p : kBinaryPredicates) {
    CHECK_FALSE(r.binary(p, {"zz"}, {"b"}));
    CHECK_FALSE(r.binary(p, {"b"}, {"zz"}));
  }
  // Unknown labels inside a task are ignored.
  CHECK(r.always_occurs({"a1", "a2", "zz"}));
}

TEST_CASE("overlapping tasks") {
  ModelRelations r(fixtures::f5());
  CHECK(r.binary(Predicate::CanCooccur, {"b"}, {"b"}));
  CHECK_FALSE(r.binary(Predicate::CanConflict, {"b"}, {"b"}));
  CHECK(r.binary(Predicate::TotalCausal, {"b"}, {"b"}));
  CHECK(r.binary(Predicate::TotalConcurrent, {"b"}, {"b"}));
  CHECK(r.binary(Predicate::CanCooccur, {"a1", "b"}, {"b", "c"}));
  Task y{"b", "c"};
  for (auto p : kBinaryPredicates)
    CHECK(r.binary(p, {"a1", "b"}, y) == oracle::oracle_predicate(p, fixtures::f5(), {"a1", "b"}, &y));
}

TEST_CASE("evaluation is independent of unification order") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 25; ++k) {
    auto s = random_sound_net(rng);
    auto labels = s.observable_labels();
    std::vector<std::string> ls(labels.begin(), labels.end());
    if (ls.size() < 3) continue;
    Task x{ls[0], ls[1]}, y{ls[2]};
    auto fwd = unify(unify(s, x).system, y);
    auto bwd_first = unify(s, y);
    auto bwd = unify(bwd_first.system, x);
    auto fx = unify(s, x);
    auto pair = unify_pair(s, x, y);
    ModelRelations a(pair.system);
    auto gf = build_graph(fwd.system);
    auto gb = build_graph(bwd.system);
    auto xf = mask_of(fwd.system, std::vector<std::string>{fx.solitary});
    auto yf = mask_of(fwd.system, std::vector<std::string>{fwd.solitary});
    auto xb = mask_of(bwd.system, std::vector<std::string>{bwd.solitary});
    auto yb = mask_of(bwd.system, std::vector<std::string>{bwd_first.solitary});
    CHECK(can_conflict(gf, xf, yf) == can_conflict(gb, xb, yb));
    CHECK(can_conflict(gf, yf, xf) == can_conflict(gb, yb, xb));
    CHECK(can_cooccur(gf, xf, yf) == can_cooccur(gb, xb, yb));
    CHECK(total_causal(gf, xf, yf) == total_causal(gb, xb, yb));
    CHECK(total_concurrent(build_prefix(fwd.system), xf, yf) == total_concurrent(build_prefix(bwd.system), xb, yb));
  }
}

TEST_CASE("unification keeps unary predicates of other labels") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 30; ++k) {
    auto s = random_sound_net(rng);
    auto labels = s.observable_labels();
    if (labels.size() < 2) continue;
    Task x{*labels.begin()};
    auto u = unify(s, x);
    for (const auto& l : labels) {
      if (x.count(l)) continue;
      CHECK(oracle::direct_predicate(Predicate::CanOccur, s, {l}) ==
            oracle::direct_predicate(Predicate::CanOccur, u.system, {l}));
      CHECK(oracle::direct_predicate(Predicate::AlwaysOccurs, s, {l}) ==
            oracle::direct_predicate(Predicate::AlwaysOccurs, u.system, {l}));
    }
  }
}

TEST_CASE("conflict and cooccur exclude each other; singletons match direct evaluation") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 30; ++k) {
    GeneratorOptions o;
    o.cyclic = k % 2 == 0;
    auto s = random_sound_net(rng, o);
    ModelRelations r(s);
    auto labels = s.observable_labels();
    for (const auto& a : labels)
      for (const auto& b : labels) {
        CHECK_FALSE((r.binary(Predicate::Conflict, {a}, {b}) && r.binary(Predicate::Cooccur, {a}, {b})));
        auto pr = r.pair({a}, {b});
        for (auto p : kBinaryPredicates) CHECK(pr.get(p) == r.binary(p, {a}, {b}));
      }
    if (s.cyclic()) continue;
    for (const auto& a : labels)
      for (const auto& b : labels)
        if (s.transitions_labelled({a}).size() == 1 && s.transitions_labelled({b}).size() == 1)
          for (auto p : {Predicate::CanConflict, Predicate::CanCooccur, Predicate::TotalCausal,
                         Predicate::TotalConcurrent}) {
            Task y{b};
            CHECK(r.binary(p, {a}, {b}) == oracle::direct_predicate(p, s, {a}, &y));
          }
  }
}

TEST_CASE("free wrappers") {
  auto s = fixtures::f5();
  CHECK(can_occur(s, {"a1"}));
  CHECK(conflict(s, {"a1"}, {"a2"}));
  CHECK(cooccur(s, {"b"}, {"e"}));
  CHECK(total_causal(s, {"a1"}, {"c"}));
  CHECK(total_concurrent(s, {"c"}, {"d"}));
  CHECK_FALSE(total_concurrent(s, {"b"}, {"c"}));
  CHECK(predicate_from_name("TotalCausal") == Predicate::TotalCausal);
  CHECK_FALSE(predicate_from_name("totalcausal").has_value());
  CHECK(is_symmetric(Predicate::Cooccur));
  CHECK_FALSE(is_symmetric(Predicate::CanConflict));
}

TEST_CASE("a looping task is not totally concurrent with itself") {
  ModelRelations r(fixtures::f_loop());
  CHECK_FALSE(r.binary(Predicate::TotalConcurrent, {"l"}, {"l"}));
  CHECK_FALSE(r.binary(Predicate::TotalCausal, {"l"}, {"l"}));
  // s occurs once per run: no pair of distinct events to contradict either.
  CHECK(r.binary(Predicate::TotalConcurrent, {"s"}, {"s"}));
  CHECK(r.binary(Predicate::TotalCausal, {"s"}, {"s"}));
}
