#include "pql/repository.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "pql/error.hpp"
#include "pql/index.hpp"
#include "pql/pnml.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pql {

std::string_view status_name(ModelStatus s) {
  switch (s) {
    case ModelStatus::Unindexed: return "unindexed";
    case ModelStatus::Indexing: return "indexing";
    case ModelStatus::Indexed: return "indexed";
    case ModelStatus::CannotIndex: return "cannot-index";
  }
  return "?";
}

ModelStatus status_from_name(std::string_view s) {
  for (auto v : {ModelStatus::Unindexed, ModelStatus::Indexing, ModelStatus::Indexed, ModelStatus::CannotIndex})
    if (status_name(v) == s) return v;
  throw StoreError("unknown model status: " + std::string(s));
}

ModelRecord* Catalog::find(const std::string& id) {
  for (auto& m : models)
    if (m.id == id) return &m;
  return nullptr;
}

const ModelRecord* Catalog::find(const std::string& id) const {
  for (const auto& m : models)
    if (m.id == id) return &m;
  return nullptr;
}

std::string normalize_location(const std::string& path) {
  std::string out;
  std::stringstream in(path);
  std::string seg;
  while (std::getline(in, seg, '/'))
    if (!seg.empty()) out += "/" + seg;
  return out.empty() ? "/" : out;
}

namespace {

constexpr int kFormatVersion = 1;

void check_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") throw StoreError("invalid model id: '" + id + "'");
  for (unsigned char c : id)
    if (c == '/' || c == '\\' || c < 0x20) throw StoreError("invalid character in model id: '" + id + "'");
}

class FileLock {
 public:
  explicit FileLock(const fs::path& p) {
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw StoreError("cannot open lock file " + p.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw StoreError("cannot lock " + p.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

void write_atomically(const fs::path& target, const std::string& content) {
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw StoreError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw StoreError("cannot replace " + target.string() + ": " + ec.message());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json to_json(const ModelRecord& m) {
  return json{{"kind", "model"},
              {"id", m.id},
              {"location", m.location},
              {"status", status_name(m.status)},
              {"reason", m.reason},
              {"generation", m.generation},
              {"workflow", m.workflow},
              {"violation", m.violation},
              {"attributes", m.attributes},
              {"thresholds", m.thresholds},
              {"claimed_by", m.claimed_by},
              {"index_seconds", m.index_seconds}};
}

ModelRecord model_from_json(const json& j) {
  ModelRecord m;
  m.id = j.at("id").get<std::string>();
  m.location = j.value("location", "/");
  m.status = status_from_name(j.value("status", "unindexed"));
  m.reason = j.value("reason", "");
  m.generation = j.value("generation", std::uint64_t{0});
  m.workflow = j.value("workflow", true);
  m.violation = j.value("violation", "");
  m.attributes = j.value("attributes", std::map<std::string, std::string>{});
  m.thresholds = j.value("thresholds", std::vector<double>{});
  m.claimed_by = j.value("claimed_by", "");
  m.index_seconds = j.value("index_seconds", 0.0);
  return m;
}

}  // namespace

Store::Store(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_ / "models", ec);
  if (ec) throw StoreError("cannot create store at " + dir_.string() + ": " + ec.message());
}

fs::path Store::model_path(const std::string& id) const { return dir_ / "models" / (id + ".pnml"); }

Catalog Store::load() const {
  Catalog c;
  c.locations.insert("/");
  auto path = dir_ / "catalog.jsonl";
  if (!fs::exists(path)) return c;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      auto kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        if (j.value("version", 0) != kFormatVersion) throw StoreError("unsupported catalog version");
        c.next_generation = j.value("next_generation", std::uint64_t{1});
      } else if (kind == "model") {
        c.models.push_back(model_from_json(j));
      } else if (kind == "location") {
        c.locations.insert(j.at("path").get<std::string>());
      } else if (kind == "nesting") {
        c.nesting.emplace(j.at("inner").get<std::string>(), j.at("outer").get<std::string>());
      } else if (kind == "attribute") {
        c.attribute_patterns[j.at("name").get<std::string>()] = j.at("pattern").get<std::string>();
      }
    } catch (const json::exception& e) {
      throw StoreError("catalog line " + std::to_string(n) + ": " + e.what());
    }
  }
  std::sort(c.models.begin(), c.models.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return c;
}

void Store::save(const Catalog& c) const {
  std::ostringstream out;
  out << json{{"kind", "header"}, {"format", "pql-store"}, {"version", kFormatVersion},
              {"next_generation", c.next_generation}}.dump()
      << "\n";
  for (const auto& l : c.locations) out << json{{"kind", "location"}, {"path", l}}.dump() << "\n";
  for (const auto& [inner, outer] : c.nesting)
    out << json{{"kind", "nesting"}, {"inner", inner}, {"outer", outer}}.dump() << "\n";
  for (const auto& [name, pattern] : c.attribute_patterns)
    out << json{{"kind", "attribute"}, {"name", name}, {"pattern", pattern}}.dump() << "\n";
  auto models = c.models;
  std::sort(models.begin(), models.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& m : models) out << to_json(m).dump() << "\n";
  write_atomically(dir_ / "catalog.jsonl", out.str());
}

void Store::update(const std::function<bool(Catalog&)>& f) {
  FileLock lock(dir_ / "lock");
  auto c = load();
  if (f(c)) save(c);
}

void Store::locked(const std::function<void()>& f) const {
  FileLock lock(dir_ / "lock");
  f();
}

ModelRecord Store::store_model(const std::string& id, const std::string& pnml, const std::string& location,
                               const std::map<std::string, std::string>& attributes) {
  check_id(id);
  auto parsed = read_pnml(pnml);
  auto wf = is_workflow(parsed.system);
  for (const auto& [name, value] : attributes)
    if (name == "ID" || name == "Location") throw StoreError("attribute " + name + " is set automatically");
  ModelRecord rec;
  update([&](Catalog& c) {
    if (c.find(id)) throw StoreError("duplicate model id: " + id);
    for (const auto& [name, value] : attributes) {
      auto p = c.attribute_patterns.find(name);
      if (p != c.attribute_patterns.end() && !std::regex_match(value, std::regex(p->second)))
        throw StoreError("value '" + value + "' not permitted for attribute " + name);
    }
    rec.id = id;
    rec.location = normalize_location(location);
    rec.generation = c.next_generation++;
    rec.workflow = wf.ok;
    rec.violation = wf.violation;
    rec.attributes = attributes;
    write_atomically(model_path(id), pnml);
    c.locations.insert(rec.location);
    c.models.push_back(rec);
    return true;
  });
  return rec;
}

std::vector<ModelRecord> Store::store_directory(const fs::path& dir, const std::string& location) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pnml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ModelRecord> out;
  for (const auto& f : files) out.push_back(store_model(f.filename().string(), read_file(f), location));
  return out;
}

void Store::remove(const std::string& id) {
  update([&](Catalog& c) {
    auto it = std::find_if(c.models.begin(), c.models.end(), [&](const auto& m) { return m.id == id; });
    if (it == c.models.end()) throw StoreError("unknown model id: " + id);
    c.models.erase(it);
    std::error_code ec;
    fs::remove(model_path(id), ec);
    compact_index(index_path(), c);
    return true;
  });
}

void Store::declare_nesting(const std::string& inner, const std::string& outer) {
  update([&](Catalog& c) {
    auto a = normalize_location(inner), b = normalize_location(outer);
    c.locations.insert(a);
    c.locations.insert(b);
    c.nesting.emplace(a, b);
    return true;
  });
}

void Store::set_attribute_pattern(const std::string& name, const std::string& pattern) {
  try {
    std::regex check(pattern);
  } catch (const std::regex_error& e) {
    throw StoreError("bad attribute pattern: " + std::string(e.what()));
  }
  update([&](Catalog& c) {
    c.attribute_patterns[name] = pattern;
    return true;
  });
}

void Store::reset() {
  locked([&] {
    std::error_code ec;
    fs::remove_all(dir_ / "models", ec);
    fs::remove(index_path(), ec);
    fs::create_directories(dir_ / "models", ec);
    Catalog fresh;
    fresh.locations.insert("/");
    // Generations keep increasing so stale index lines never match again.
    fresh.next_generation = load().next_generation;
    save(fresh);
  });
}

NetSystem Store::load_system(const std::string& id) const {
  check_id(id);
  if (!std::filesystem::exists(model_path(id))) throw StoreError("unknown model id: " + id);
  return read_pnml(read_file(model_path(id))).system;
}

void Store::request_index(const std::string& id) {
  update([&](Catalog& c) {
    auto* m = c.find(id);
    if (!m) throw StoreError("unknown model id: " + id);
    m->status = ModelStatus::Unindexed;
    m->reason.clear();
    m->claimed_by.clear();
    return true;
  });
}

Repository Repository::from_store(const Store& store) {
  return from_store(store, [](const ModelRecord&) { return true; });
}

Repository Repository::from_store(const Store& store, const std::function<bool(const ModelRecord&)>& keep) {
  Repository r;
  auto c = store.load();
  for (const auto& l : c.locations) r.locations_.insert(l);
  for (const auto& [a, b] : c.nesting) r.declare_nesting(a, b);
  for (const auto& m : c.models)
    if (keep(m)) r.add(m, store.load_system(m.id));
  return r;
}

void Repository::add(const ModelRecord& record, NetSystem system) {
  if (models_.count(record.id)) throw StoreError("duplicate model id: " + record.id);
  for (const auto& l : system.observable_labels()) vocabulary_.insert(l);
  for (const auto& [name, value] : record.attributes) user_attributes_.insert(name);
  auto rec = record;
  rec.location = normalize_location(rec.location);
  locations_.insert(rec.location);
  models_.emplace(rec.id, Entry{rec, std::move(system)});
  ids_.insert(std::upper_bound(ids_.begin(), ids_.end(), rec.id), rec.id);
}

void Repository::declare_nesting(const std::string& inner, const std::string& outer) {
  auto a = normalize_location(inner), b = normalize_location(outer);
  locations_.insert(a);
  locations_.insert(b);
  nesting_.emplace(a, b);
}

const NetSystem& Repository::system(const std::string& id) const {
  auto it = models_.find(id);
  if (it == models_.end()) throw StoreError("unknown model id: " + id);
  return it->second.system;
}

const ModelRecord& Repository::record(const std::string& id) const {
  auto it = models_.find(id);
  if (it == models_.end()) throw StoreError("unknown model id: " + id);
  return it->second.record;
}

std::optional<std::string> Repository::attribute(const std::string& id, const std::string& name) const {
  const auto& rec = record(id);
  if (name == "ID") return rec.id;
  if (name == "Location") return rec.location;
  auto it = rec.attributes.find(name);
  if (it == rec.attributes.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Repository::attribute_names() const {
  std::vector<std::string> out{"ID", "Location"};
  for (const auto& n : user_attributes_)
    if (n != "ID" && n != "Location") out.push_back(n);
  return out;
}

bool Repository::supports_attribute(const std::string& name) const {
  return name == "ID" || name == "Location" || user_attributes_.count(name) > 0;
}

bool Repository::nested(const std::string& inner, const std::string& outer) const {
  auto a = normalize_location(inner), b = normalize_location(outer);
  if (a == b || nesting_.count({a, b})) return true;
  if (b == "/") return true;
  return a.size() > b.size() && a.compare(0, b.size(), b) == 0 && a[b.size()] == '/';
}

}  // namespace pql
