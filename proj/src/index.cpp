#include "pql/index.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "pql/error.hpp"
#include "pql/labels.hpp"
#include "pql/soundness.hpp"

namespace fs = std::filesystem;

namespace pql {

namespace {

constexpr const char* kHeader = "# pql-index 1";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool deadline_passed(const std::optional<Clock::time_point>& deadline) {
  return deadline && Clock::now() > *deadline;
}

Vocabulary store_vocabulary(const Store& store, const Catalog& catalog) {
  Vocabulary v;
  for (const auto& m : catalog.models) {
    try {
      for (const auto& l : store.load_system(m.id).observable_labels()) v.insert(l);
    } catch (const Error&) {
      // Removed concurrently or unreadable; it contributes no labels.
    }
  }
  return v;
}

void append_lines(const fs::path& file, const std::vector<std::string>& lines) {
  bool fresh = !fs::exists(file) || fs::file_size(file) == 0;
  std::ofstream out(file, std::ios::app | std::ios::binary);
  if (!out) throw StoreError("cannot append to " + file.string());
  std::string buf;
  if (fresh) buf += std::string(kHeader) + "\n";
  for (const auto& l : lines) buf += l + "\n";
  out << buf;
  out.flush();
  if (!out) throw StoreError("cannot append to " + file.string());
}

void compact(const fs::path& file, const Catalog& catalog, const std::string* exclude) {
  if (!fs::exists(file)) return;
  std::ifstream in(file, std::ios::binary);
  std::string line, kept = std::string(kHeader) + "\n";
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() < 4) continue;
    if (exclude && f[1] == *exclude) continue;
    const auto* m = catalog.find(f[1]);
    if (!m || std::to_string(m->generation) != f[2]) continue;
    kept += line + "\n";
  }
  in.close();
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << kept;
    if (!out) throw StoreError("cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

std::string clock_stamp() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  localtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms;
  return out.str();
}

IndexOutcome process(Store& store, const ModelRecord& rec, const IndexSettings& settings, const std::string& claimant,
                     double max_seconds, const std::function<void(const std::string&)>& say) {
  auto t0 = Clock::now();
  auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(max_seconds));
  IndexOutcome outcome;
  std::vector<std::string> lines;
  const auto& id = rec.id;

  auto fail = [&](std::string reason) {
    outcome.status = ModelStatus::CannotIndex;
    outcome.reason = std::move(reason);
  };

  say("Start checking model with ID " + id);
  std::optional<NetSystem> system;
  try {
    system = store.load_system(id);
    if (!rec.workflow) {
      fail("not a workflow net: " + rec.violation);
    } else {
      auto report = check_soundness(*system, settings.budget);
      if (!report.sound) fail("unsound");
    }
  } catch (const UnboundedError&) {
    fail("unbounded");
  } catch (const BudgetExceeded&) {
    fail("state budget exceeded");
  } catch (const Error& e) {
    fail(std::string("cannot read model: ") + e.what());
  }
  if (outcome.status != ModelStatus::CannotIndex && Clock::now() > deadline) fail("time budget exceeded");
  say("Finished checking model with ID " + id);

  if (outcome.status != ModelStatus::CannotIndex) {
    say("Start indexing model with ID " + id);
    try {
      auto vocab = store_vocabulary(store, store.load());
      lines = compute_index_lines(id, rec.generation, *system, vocab, settings.thresholds, settings.budget, deadline);
      outcome.status = ModelStatus::Indexed;
      outcome.records = lines.size();
    } catch (const TimeBudgetExceeded&) {
      fail("time budget exceeded");
    } catch (const BudgetExceeded&) {
      fail("state budget exceeded");
    }
    say("Finished indexing model with ID " + id);
  }
  outcome.seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  store.update([&](Catalog& c) {
    auto* m = c.find(id);
    // Deleted or re-stored meanwhile: drop the work.
    if (!m || m->generation != rec.generation || m->claimed_by != claimant) return false;
    if (outcome.status == ModelStatus::Indexed) {
      compact(store.index_path(), c, &id);
      append_lines(store.index_path(), lines);
      m->thresholds = settings.thresholds;
    } else {
      m->thresholds.clear();
    }
    m->status = outcome.status;
    m->reason = outcome.reason;
    m->claimed_by.clear();
    m->index_seconds = outcome.seconds;
    return true;
  });
  return outcome;
}

}  // namespace

std::string task_key(const Task& task) { return nlohmann::json(task).dump(); }

Task task_from_key(const std::string& key) {
  try {
    return nlohmann::json::parse(key).get<Task>();
  } catch (const nlohmann::json::exception& e) {
    throw StoreError("bad task key " + key + ": " + e.what());
  }
}

std::string format_threshold(double theta) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, theta);
  return std::string(buf, r.ptr);
}

std::vector<IndexedTask> index_tasks(const NetSystem& system, const Vocabulary& vocabulary, double theta) {
  std::vector<IndexedTask> out;
  auto labels = system.observable_labels();
  Vocabulary scope = vocabulary;
  scope.insert(labels.begin(), labels.end());
  for (const auto& seed : labels) {
    IndexedTask t;
    t.seed = seed;
    t.resolved = similar(seed, theta, scope);
    for (const auto& l : t.resolved)
      if (labels.count(l)) t.effective.insert(l);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> compute_index_lines(const std::string& id, std::uint64_t generation,
                                             const NetSystem& system, const Vocabulary& vocabulary,
                                             const std::vector<double>& thresholds, std::size_t budget,
                                             std::optional<Clock::time_point> deadline) {
  if (deadline_passed(deadline)) throw TimeBudgetExceeded();
  ModelRelations rel(system, budget);
  std::map<Task, std::pair<bool, bool>> unary;
  std::map<std::pair<Task, Task>, PairRelations> pairs;
  std::vector<std::string> lines;
  const auto gen = std::to_string(generation);

  for (double theta : thresholds) {
    const auto th = format_threshold(theta);
    auto prefix = [&](char kind) { return std::string(1, kind) + "\t" + id + "\t" + gen + "\t" + th + "\t"; };
    std::set<Task> keys;
    for (const auto& t : index_tasks(system, vocabulary, theta)) {
      lines.push_back(prefix('T') + t.seed + "\t" + task_key(t.resolved) + "\t" + task_key(t.effective));
      keys.insert(t.effective);
    }
    // Sort by key string so the symmetric half matches lookups.
    std::vector<std::pair<std::string, Task>> sorted;
    for (const auto& k : keys) sorted.emplace_back(task_key(k), k);
    std::sort(sorted.begin(), sorted.end());

    for (const auto& [key, task] : sorted) {
      if (deadline_passed(deadline)) throw TimeBudgetExceeded();
      auto it = unary.find(task);
      if (it == unary.end()) it = unary.emplace(task, std::pair{rel.can_occur(task), rel.always_occurs(task)}).first;
      lines.push_back(prefix('U') + "CanOccur\t" + key + "\t" + (it->second.first ? "1" : "0"));
      lines.push_back(prefix('U') + "AlwaysOccurs\t" + key + "\t" + (it->second.second ? "1" : "0"));
    }
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = i; j < sorted.size(); ++j) {
        if (deadline_passed(deadline)) throw TimeBudgetExceeded();
        const auto& [ki, ti] = sorted[i];
        const auto& [kj, tj] = sorted[j];
        auto it = pairs.find({ti, tj});
        if (it == pairs.end()) it = pairs.emplace(std::pair{ti, tj}, rel.pair(ti, tj)).first;
        const auto& r = it->second;
        auto emit = [&](Predicate p, const std::string& a, const std::string& b, bool v) {
          lines.push_back(prefix('B') + std::string(predicate_name(p)) + "\t" + a + "\t" + b + "\t" + (v ? "1" : "0"));
        };
        emit(Predicate::CanCooccur, ki, kj, r.can_cooccur);
        emit(Predicate::Conflict, ki, kj, r.conflict());
        emit(Predicate::Cooccur, ki, kj, r.cooccur());
        emit(Predicate::TotalConcurrent, ki, kj, r.total_concurrent);
        emit(Predicate::CanConflict, ki, kj, r.can_conflict_xy);
        emit(Predicate::TotalCausal, ki, kj, r.total_causal_xy);
        if (i != j) {
          emit(Predicate::CanConflict, kj, ki, r.can_conflict_yx);
          emit(Predicate::TotalCausal, kj, ki, r.total_causal_yx);
        }
      }
  }
  return lines;
}

void compact_index(const fs::path& file, const Catalog& catalog) { compact(file, catalog, nullptr); }

RelationIndex RelationIndex::load(const Store& store) {
  RelationIndex idx;
  store.locked([&] { idx = load(store.index_path(), store.load()); });
  return idx;
}

RelationIndex RelationIndex::load(const fs::path& file, const Catalog& catalog) {
  RelationIndex idx;
  std::ifstream in(file, std::ios::binary);
  if (!in) return idx;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() < 7) continue;  // torn write
    const auto* m = catalog.find(f[1]);
    if (!m || std::to_string(m->generation) != f[2]) continue;
    double theta = 0;
    try {
      theta = std::stod(f[3]);
    } catch (const std::exception&) {
      continue;
    }
    auto& e = idx.models_[f[1]];
    e.generation = m->generation;
    e.thresholds.insert(theta);
    try {
      if (f[0] == "T") {
        e.tasks[theta].push_back({f[4], task_from_key(f[5]), task_from_key(f[6])});
      } else if (f[0] == "U") {
        auto p = predicate_from_name(f[4]);
        if (p) e.unary[{*p, f[5]}] = f[6] == "1";
      } else if (f[0] == "B" && f.size() >= 8) {
        auto p = predicate_from_name(f[4]);
        if (p) e.binary[{*p, f[5], f[6]}] = f[7] == "1";
      }
    } catch (const StoreError&) {
      continue;
    }
  }
  return idx;
}

std::set<double> RelationIndex::thresholds(const std::string& id) const {
  auto it = models_.find(id);
  return it == models_.end() ? std::set<double>{} : it->second.thresholds;
}

std::size_t RelationIndex::unary_count(const std::string& id) const {
  auto it = models_.find(id);
  return it == models_.end() ? 0 : it->second.unary.size();
}

std::size_t RelationIndex::binary_count(const std::string& id) const {
  auto it = models_.find(id);
  return it == models_.end() ? 0 : it->second.binary.size();
}

std::vector<IndexedTask> RelationIndex::tasks(const std::string& id, double theta) const {
  auto it = models_.find(id);
  if (it == models_.end()) return {};
  auto t = it->second.tasks.find(theta);
  return t == it->second.tasks.end() ? std::vector<IndexedTask>{} : t->second;
}

std::optional<bool> RelationIndex::lookup(const std::string& id, Predicate p, const Task& x, const Task* y) const {
  auto it = models_.find(id);
  if (it == models_.end()) return std::nullopt;
  const auto& e = it->second;
  if (is_unary(p)) {
    auto u = e.unary.find({p, task_key(x)});
    if (u == e.unary.end()) return std::nullopt;
    return u->second;
  }
  if (!y) throw std::invalid_argument("binary predicate needs two tasks");
  auto a = task_key(x), b = task_key(*y);
  if (is_symmetric(p) && b < a) std::swap(a, b);
  auto r = e.binary.find({p, a, b});
  if (r == e.binary.end()) return std::nullopt;
  return r->second;
}

PredicateEngine::PredicateEngine(const Repository& repo, const RelationIndex* index, std::size_t budget,
                                 std::function<void(const std::string&)> warn)
    : repo_(repo), index_(index), budget_(budget), warn_(std::move(warn)) {}

PredicateEngine::Model::Model(const PredicateEngine& engine, const std::string& id)
    : engine_(engine), id_(id), system_(engine.repo_.system(id)), labels_(system_.observable_labels()) {}

bool PredicateEngine::Model::evaluate(Predicate p, const Task& x, const Task* y) {
  validate_task(x);
  if (!is_unary(p)) {
    if (!y) throw std::invalid_argument("binary predicate needs two tasks");
    validate_task(*y);
  }
  auto restrict = [&](const Task& t) {
    Task out;
    std::set_intersection(t.begin(), t.end(), labels_.begin(), labels_.end(), std::inserter(out, out.end()));
    return out;
  };
  auto ex = restrict(x);
  Task ey = y ? restrict(*y) : Task{};
  if (ex.empty() || (!is_unary(p) && ey.empty())) return false;

  if (engine_.index_) {
    if (auto v = engine_.index_->lookup(id_, p, ex, is_unary(p) ? nullptr : &ey)) {
      ++engine_.hits_;
      return *v;
    }
  }
  ++engine_.misses_;
  if (engine_.index_ && !warned_ && engine_.warn_) {
    engine_.warn_("warning: no index entry for model " + id_ + "; computing " + std::string(predicate_name(p)) +
                  " on the fly");
    warned_ = true;
  }
  if (!fresh_) fresh_ = std::make_unique<ModelRelations>(system_, engine_.budget_);
  return is_unary(p) ? fresh_->evaluate(p, ex) : fresh_->binary(p, ex, ey);
}

IndexOutcome index_model(Store& store, const std::string& id, const IndexSettings& settings,
                         const std::string& claimant) {
  ModelRecord rec;
  store.update([&](Catalog& c) {
    auto* m = c.find(id);
    if (!m) throw StoreError("unknown model id: " + id);
    if (m->status == ModelStatus::Indexing && m->claimed_by != claimant)
      throw StoreError("model " + id + " is being indexed by " + m->claimed_by);
    m->status = ModelStatus::Indexing;
    m->claimed_by = claimant;
    rec = *m;
    return true;
  });
  return process(store, rec, settings, claimant, settings.max_seconds, [](const std::string&) {});
}

std::optional<ModelRecord> claim_next(Store& store, const std::string& name) {
  std::optional<ModelRecord> out;
  store.update([&](Catalog& c) {
    for (auto& m : c.models)
      if (m.status == ModelStatus::Unindexed) {
        m.status = ModelStatus::Indexing;
        m.claimed_by = name;
        out = m;
        return true;
      }
    return false;
  });
  return out;
}

void run_bot(Store& store, const BotOptions& options) {
  auto say = [&](const std::string& msg) {
    if (options.log) options.log(clock_stamp() + " " + options.name + " - " + msg);
  };
  auto stopped = [&] { return options.stop && options.stop->load(); };
  while (!stopped()) {
    auto job = claim_next(store, options.name);
    if (!job) {
      say("There are no pending jobs");
      if (options.exit_when_idle) return;
      say("Going to sleep for " + format_threshold(options.sleep_seconds) + " seconds");
      auto until = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(options.sleep_seconds));
      while (Clock::now() < until && !stopped()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
      say("Woke up");
      continue;
    }
    say("Retrieved indexing job for the model with ID " + job->id);
    if (options.before_index) options.before_index(job->id);
    double limit = options.settings.max_seconds;
    if (options.max_seconds_for)
      if (auto v = options.max_seconds_for(job->id)) limit = *v;
    auto outcome = process(store, *job, options.settings, options.name, limit, say);
    if (outcome.status == ModelStatus::CannotIndex)
      say("Model with ID " + job->id + " cannot be indexed: " + outcome.reason);
  }
}

}  // namespace pql
