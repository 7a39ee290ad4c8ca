#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "pql/error.hpp"
#include "pql/index.hpp"
#include "pql/pnml.hpp"
#include "pql/repository.hpp"
#include "tempdir.hpp"

using namespace pql;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("store and retrieve") {
  TempDir tmp;
  Store store(tmp.path / "store");
  auto rec = store.store_model("F5", write_pnml(fixtures::f5()), "/fixtures", {{"Author", "test"}});
  CHECK(rec.status == ModelStatus::Unindexed);
  CHECK(rec.workflow);

  auto repo = Repository::from_store(store);
  REQUIRE(repo.contains("F5"));
  CHECK(repo.attribute("F5", "ID") == "F5");
  CHECK(repo.attribute("F5", "Location") == "/fixtures");
  CHECK(repo.attribute("F5", "Author") == "test");
  CHECK_FALSE(repo.attribute("F5", "Missing").has_value());
  CHECK(repo.attribute_names() == std::vector<std::string>{"ID", "Location", "Author"});
  CHECK(repo.system("F5").transitions().size() == 6);
  CHECK(repo.nested("/fixtures", "/fixtures"));
}

TEST_CASE("duplicate id and bad input") {
  TempDir tmp;
  Store store(tmp.path);
  store.store_model("m", write_pnml(fixtures::f5()));
  CHECK_THROWS_AS(store.store_model("m", write_pnml(fixtures::single())), StoreError);
  CHECK_THROWS_AS(store.store_model("bad", "<pnml><net>"), PnmlError);
  CHECK_THROWS_AS(store.store_model("a/b", write_pnml(fixtures::single())), StoreError);
  CHECK_THROWS_AS(store.store_model("x", write_pnml(fixtures::single()), "/", {{"ID", "y"}}), StoreError);
  CHECK(store.load().models.size() == 1);
}

TEST_CASE("non-workflow nets are accepted but flagged") {
  TempDir tmp;
  Store store(tmp.path);
  NetBuilder b;
  b.place("i", 1).place("o").place("stray");
  b.transition("t", "t").arc("i", "t").arc("t", "o");
  auto rec = store.store_model("nw", write_pnml(b.build()));
  CHECK_FALSE(rec.workflow);
  CHECK_FALSE(rec.violation.empty());
  auto out = index_model(store, "nw", IndexSettings{});
  CHECK(out.status == ModelStatus::CannotIndex);
  CHECK(out.reason.rfind("not a workflow net", 0) == 0);
}

TEST_CASE("nesting") {
  Repository repo;
  repo.declare_nesting("/Ten-Models-BPMN", "/");
  repo.declare_nesting("/x", "/y");
  CHECK(repo.nested("/Ten-Models-BPMN", "/"));
  CHECK(repo.nested("/a", "/a"));
  CHECK(repo.nested("/a/b", "/a"));
  CHECK(repo.nested("/x", "/y"));
  CHECK_FALSE(repo.nested("/y", "/x"));
  CHECK_FALSE(repo.nested("/ab", "/a"));
  CHECK_FALSE(repo.nested("/a", "/b"));
  CHECK(normalize_location("a//b/") == "/a/b");
  CHECK(normalize_location("") == "/");
}

TEST_CASE("declared nesting persists") {
  TempDir tmp;
  Store store(tmp.path);
  store.declare_nesting("/x", "/y");
  auto repo = Repository::from_store(store);
  CHECK(repo.nested("/x", "/y"));
  CHECK(repo.locations().count("/y"));
}

TEST_CASE("attribute validators") {
  TempDir tmp;
  Store store(tmp.path);
  store.set_attribute_pattern("Year", "[0-9]{4}");
  CHECK_THROWS_AS(store.store_model("m", write_pnml(fixtures::single()), "/", {{"Year", "soon"}}), StoreError);
  CHECK_NOTHROW(store.store_model("m", write_pnml(fixtures::single()), "/", {{"Year", "2015"}}));
  CHECK_THROWS_AS(store.set_attribute_pattern("Bad", "("), StoreError);
}

TEST_CASE("store then delete restores ids, attributes and index") {
  TempDir tmp;
  Store store(tmp.path);
  store.store_model("a", write_pnml(fixtures::f5()), "/", {{"K", "v"}});
  IndexSettings s;
  s.thresholds = {1.0};
  index_model(store, "a", s);
  auto catalog_before = slurp(tmp.path / "catalog.jsonl");
  auto index_before = slurp(store.index_path());
  auto ids_before = Repository::from_store(store).ids();

  store.store_model("b", write_pnml(fixtures::f_loop()), "/", {{"K", "w"}});
  index_model(store, "b", s);
  CHECK(slurp(store.index_path()) != index_before);
  store.remove("b");

  CHECK(Repository::from_store(store).ids() == ids_before);
  CHECK(slurp(store.index_path()) == index_before);
  auto after = store.load();
  CHECK(after.models.size() == 1);
  CHECK(after.models[0].attributes.at("K") == "v");
  CHECK_FALSE(std::filesystem::exists(store.model_path("b")));
  CHECK_THROWS_AS(store.remove("b"), StoreError);
  (void)catalog_before;
}

TEST_CASE("store directory uses file names") {
  TempDir tmp;
  std::filesystem::create_directories(tmp.path / "in");
  std::ofstream(tmp.path / "in" / "one.pnml") << write_pnml(fixtures::f5());
  std::ofstream(tmp.path / "in" / "two.pnml") << write_pnml(fixtures::single());
  std::ofstream(tmp.path / "in" / "notes.txt") << "skip";
  Store store(tmp.path / "store");
  auto recs = store.store_directory(tmp.path / "in");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].id == "one.pnml");
  CHECK(recs[1].id == "two.pnml");
}

TEST_CASE("reset wipes models and index") {
  TempDir tmp;
  Store store(tmp.path);
  store.store_model("a", write_pnml(fixtures::f5()));
  index_model(store, "a", IndexSettings{});
  auto gen = store.load().next_generation;
  store.reset();
  auto c = store.load();
  CHECK(c.models.empty());
  CHECK(c.next_generation == gen);
  CHECK_FALSE(std::filesystem::exists(store.index_path()));
  // Same id again is fine after a reset.
  CHECK_NOTHROW(store.store_model("a", write_pnml(fixtures::f5())));
}

TEST_CASE("status names round trip") {
  for (auto s : {ModelStatus::Unindexed, ModelStatus::Indexing, ModelStatus::Indexed, ModelStatus::CannotIndex})
    CHECK(status_from_name(status_name(s)) == s);
  CHECK_THROWS_AS(status_from_name("nope"), StoreError);
}
