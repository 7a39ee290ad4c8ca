#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pql/labels.hpp"
#include "pql/petri.hpp"

namespace pql {

enum class ModelStatus { Unindexed, Indexing, Indexed, CannotIndex };

std::string_view status_name(ModelStatus s);
ModelStatus status_from_name(std::string_view s);

struct ModelRecord {
  std::string id;
  std::string location = "/";
  ModelStatus status = ModelStatus::Unindexed;
  std::string reason;          // for CannotIndex
  std::uint64_t generation = 0;  // bumps whenever the id is (re)stored
  bool workflow = true;
  std::string violation;       // why is_workflow failed
  std::map<std::string, std::string> attributes;  // user attributes
  std::vector<double> thresholds;                 // indexed thresholds
  std::string claimed_by;
  double index_seconds = 0;
};

// Snapshot of the catalog file.
struct Catalog {
  std::uint64_t next_generation = 1;
  std::vector<ModelRecord> models;  // sorted by id
  std::set<std::string> locations;
  std::set<std::pair<std::string, std::string>> nesting;  // (inner, outer) as declared
  std::map<std::string, std::string> attribute_patterns;  // name -> ECMAScript regex

  ModelRecord* find(const std::string& id);
  const ModelRecord* find(const std::string& id) const;
};

// On-disk store directory:
//   catalog.jsonl   one JSON object per line (header, models, locations, nesting, attribute patterns)
//   models/<id>.pnml
//   index.log       relation index records (see index.hpp)
//   lock            flock'd by every writer
// Writers serialize on the lock; files are replaced by rename, so readers
// never see a half-written catalog.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path index_path() const { return dir_ / "index.log"; }
  std::filesystem::path model_path(const std::string& id) const;

  Catalog load() const;

  // Runs f with the exclusive store lock held, then saves the catalog it
  // was handed (unless f returns false).
  void update(const std::function<bool(Catalog&)>& f);
  // Runs f with the lock held without touching the catalog.
  void locked(const std::function<void()>& f) const;

  ModelRecord store_model(const std::string& id, const std::string& pnml, const std::string& location = "/",
                          const std::map<std::string, std::string>& attributes = {});
  // Ingests every *.pnml file in a directory, ids = file names.
  std::vector<ModelRecord> store_directory(const std::filesystem::path& dir, const std::string& location = "/");
  void remove(const std::string& id);
  void declare_nesting(const std::string& inner, const std::string& outer);
  void set_attribute_pattern(const std::string& name, const std::string& pattern);
  void reset();

  NetSystem load_system(const std::string& id) const;
  // Sets status back to unindexed so a bot picks the model up again.
  void request_index(const std::string& id);

 private:
  void save(const Catalog& c) const;

  std::filesystem::path dir_;
};

// The repository as queries see it: systems, attributes, locations and the
// nesting relation. Built from a Store snapshot or assembled in memory.
class Repository {
 public:
  Repository() = default;
  static Repository from_store(const Store& store);
  // Only the models `keep` accepts.
  static Repository from_store(const Store& store, const std::function<bool(const ModelRecord&)>& keep);

  void add(const ModelRecord& record, NetSystem system);
  void declare_nesting(const std::string& inner, const std::string& outer);

  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(const std::string& id) const { return models_.count(id) > 0; }
  const NetSystem& system(const std::string& id) const;
  const ModelRecord& record(const std::string& id) const;
  const std::string& location(const std::string& id) const { return record(id).location; }

  // ID and Location are always present; user attributes may be missing.
  std::optional<std::string> attribute(const std::string& id, const std::string& name) const;
  std::vector<std::string> attribute_names() const;  // ID, Location, then sorted user names
  bool supports_attribute(const std::string& name) const;

  const std::set<std::string>& locations() const { return locations_; }
  // Reflexive; declared pairs; path-prefix containment ("/a/b" within "/a" and "/").
  bool nested(const std::string& inner, const std::string& outer) const;

  // Observable labels over all models.
  const Vocabulary& vocabulary() const { return vocabulary_; }

 private:
  struct Entry {
    ModelRecord record;
    NetSystem system;
  };
  std::map<std::string, Entry> models_;
  std::vector<std::string> ids_;
  std::set<std::string> locations_;
  std::set<std::pair<std::string, std::string>> nesting_;
  std::set<std::string> user_attributes_;
  Vocabulary vocabulary_;
};

// Slash-separated path in canonical form: leading '/', no trailing '/', no empty segments.
std::string normalize_location(const std::string& path);

}  // namespace pql
