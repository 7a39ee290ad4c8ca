#include <unistd.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pql/bench.hpp"
#include "pql/config.hpp"
#include "pql/index.hpp"
#include "pql/pnml.hpp"
#include "pql/query/evaluator.hpp"
#include "pql/query/parser.hpp"
#include "pql/repository.hpp"
#include "pql/soundness.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kStoreFailure = 3 };

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pql::Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quoted(const std::string& label) {
  return pql::query::pretty_print(pql::query::TaskExpr{pql::query::TaskExpr::Kind::Exact, label, 0, ""});
}

std::string bracket(const std::vector<std::string>& items, const std::string& sep) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out + "]";
}

std::string ms(double seconds) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(4) << seconds * 1000.0;
  return o.str();
}

struct Globals {
  std::string config_file;
  std::string store_dir;

  pql::Config config() const {
    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) {
      file = config_file;
    } else if (auto env = pql::process_env("PQL_CONFIG")) {
      file = *env;
    } else if (std::filesystem::exists("pql.ini")) {
      file = "pql.ini";
    }
    auto c = pql::load_config(file);
    if (!store_dir.empty()) c.store = store_dir;
    return c;
  }
};

pql::IndexSettings index_settings(const pql::Config& c) {
  pql::IndexSettings s;
  s.thresholds = c.indexed_thresholds;
  s.max_seconds = c.max_index_seconds;
  s.budget = c.state_budget;
  return s;
}

// ---- query output ----

void print_query_result(std::ostream& out, const pql::query::Query& q, const pql::query::QueryResult& r) {
  out << "PQL query:  " << pql::query::pretty_print(q) << "\n";
  bool all_attributes = false;
  std::vector<std::string> attrs;
  for (const auto& a : q.attributes) {
    if (a)
      attrs.push_back(*a);
    else
      all_attributes = true;
  }
  out << "Attributes: " << (all_attributes ? "[UNIVERSE]" : bracket(attrs, ", ")) << "\n";
  bool anywhere = false;
  std::vector<std::string> locs;
  for (const auto& l : q.locations) {
    if (l)
      locs.push_back(*l);
    else
      anywhere = true;
  }
  out << "Locations:  " << (anywhere ? "[UNIVERSE]" : bracket(locs, ", ")) << "\n";
  for (const auto& t : r.tasks) {
    std::vector<std::string> labels;
    for (const auto& l : t.labels) labels.push_back(quoted(l));
    out << "Task:       " << t.text << " -> " << bracket(labels, ",") << "\n";
  }
  out << "Result:     " << bracket(r.ids(), ", ") << "\n";
  if (!all_attributes) {
    for (const auto& row : r.rows) {
      out << "  " << row.id;
      for (const auto& [k, v] : row.attributes) out << "  " << k << "=" << v;
      out << "\n";
    }
  }
}

// Models marked cannot-index are not queried; pending ones are evaluated
// without the index.
pql::Repository queryable(const pql::Store& store) {
  return pql::Repository::from_store(store, [](const pql::ModelRecord& m) {
    if (m.status == pql::ModelStatus::CannotIndex) {
      std::cerr << "note: skipping model " << m.id << " (" << m.reason << ")\n";
      return false;
    }
    return true;
  });
}

int run_query_text(const std::string& text, const pql::Config& c, std::size_t threads, bool use_index) {
  auto q = pql::query::parse(text);
  pql::Store store(c.store);
  auto repo = queryable(store);
  auto index = use_index ? pql::RelationIndex::load(store) : pql::RelationIndex();
  pql::PredicateEngine engine(repo, use_index ? &index : nullptr, c.state_budget,
                              [](const std::string& msg) { std::cerr << msg << "\n"; });
  auto r = pql::query::evaluate(q, repo, engine, {c.default_similarity, threads});
  for (const auto& [id, why] : r.errors) std::cerr << "warning: model " << id << " not evaluated: " << why << "\n";
  print_query_result(std::cout, q, r);
  return kOk;
}

// ---- subcommands ----

int cmd_store(const pql::Config& c, const std::string& pnml, const std::string& id, const std::string& location,
              const std::vector<std::string>& attributes) {
  pql::Store store(c.store);
  std::map<std::string, std::string> attrs;
  for (const auto& a : attributes) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--attribute", "expected NAME=VALUE: " + a);
    attrs[a.substr(0, eq)] = a.substr(eq + 1);
  }
  std::vector<pql::ModelRecord> stored;
  if (std::filesystem::is_directory(pnml)) {
    if (!id.empty()) throw CLI::ValidationError("--id", "cannot be combined with a directory");
    stored = store.store_directory(pnml, location);
  } else {
    if (id.empty()) throw CLI::ValidationError("--id", "required when storing a single file");
    stored.push_back(store.store_model(id, read_file(pnml), location, attrs));
  }
  for (const auto& r : stored) {
    std::cout << "Stored model with ID " << r.id << "\n";
    if (!r.workflow) std::cout << "  not a workflow net: " << r.violation << "\n";
  }
  return kOk;
}

int cmd_check(const pql::Config& c, const std::string& id, const std::string& pnml) {
  pql::NetSystem system;
  if (!pnml.empty()) {
    system = pql::read_pnml_file(pnml).system;
  } else {
    system = pql::Store(c.store).load_system(id);
  }
  auto wf = pql::is_workflow(system);
  if (!wf.ok) {
    std::cout << "Workflow net:       no (" << wf.violation << ")\nSound:              no\n";
    return kDomain;
  }
  try {
    auto r = pql::check_soundness(system, c.state_budget);
    std::cout << "Workflow net:       yes\n";
    std::cout << "Bounded:            " << (r.bounded ? "yes" : "no") << "\n";
    std::cout << "Option to complete: " << (r.option_to_complete ? "yes" : "no") << "\n";
    std::cout << "Proper completion:  " << (r.proper_completion ? "yes" : "no") << "\n";
    std::vector<std::string> dead(r.dead_transitions.begin(), r.dead_transitions.end());
    std::cout << "Dead transitions:   " << bracket(dead, ", ") << "\n";
    std::cout << "Sound:              " << (r.sound ? "yes" : "no") << "\n";
    return r.sound ? kOk : kDomain;
  } catch (const pql::UnboundedError& e) {
    std::vector<std::string> w(e.witness().begin(), e.witness().end());
    std::cout << "Workflow net:       yes\nBounded:            no (witness " << bracket(w, ", ")
              << ")\nSound:              no\n";
    return kDomain;
  }
}

int cmd_index(const pql::Config& c, const std::string& id) {
  pql::Store store(c.store);
  auto out = pql::index_model(store, id, index_settings(c));
  if (out.status != pql::ModelStatus::Indexed) {
    std::cout << "Model with ID " << id << " cannot be indexed: " << out.reason << "\n";
    return kDomain;
  }
  std::cout << "Indexed model with ID " << id << " (" << out.records << " records, " << ms(out.seconds) << " ms)\n";
  return kOk;
}

int cmd_list(const pql::Config& c, const std::string& location) {
  pql::Store store(c.store);
  auto repo = pql::Repository::from_store(store, [](const pql::ModelRecord&) { return true; });
  for (const auto& m : store.load().models) {
    if (!location.empty() && !repo.nested(m.location, location)) continue;
    std::cout << m.id << "  " << pql::status_name(m.status) << "  " << m.location;
    if (!m.reason.empty()) std::cout << "  (" << m.reason << ")";
    std::cout << "\n";
  }
  return kOk;
}

int cmd_parse(const std::string& path) {
  auto q = pql::query::parse(read_file(path));
  pql::query::check_variables(q);
  std::cout << pql::query::pretty_print(q) << "\n" << pql::query::dump_parse_tree(q);
  return kOk;
}

int cmd_bot(const pql::Config& c, std::string name, double sleep, double max_seconds, bool once) {
  pql::Store store(c.store);
  pql::BotOptions o;
  o.name = name;
  o.sleep_seconds = sleep;
  o.settings = index_settings(c);
  o.settings.max_seconds = max_seconds;
  o.exit_when_idle = once;
  o.log = [](const std::string& line) { std::cout << line << std::endl; };
  o.stop = &g_stop;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  pql::run_bot(store, o);
  return kOk;
}

struct BenchArgs {
  std::string templates = "1";
  std::string templates_dir = PQL_DATA_DIR "/templates";
  std::size_t models = 16;
  std::vector<std::size_t> threads{1};
  std::vector<double> fractions{100};
  std::size_t instances = 3;
  std::size_t repeats = 1;
  std::size_t max_transitions = 8;
  std::uint64_t seed = 1;
  bool no_index = false;
};

int cmd_bench(const pql::Config& c, const BenchArgs& a) {
  auto templates = pql::bench::select_templates(pql::bench::load_templates(a.templates_dir), a.templates);
  if (templates.empty()) throw CLI::ValidationError("--templates", "no templates match '" + a.templates + "'");

  auto dir = std::filesystem::temp_directory_path() / ("pql-bench-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(p, ec);
    }
  } cleanup{dir};

  pql::Store store(dir);
  pql::bench::CollectionOptions co;
  co.models = a.models;
  co.seed = a.seed;
  co.generator.max_transitions = a.max_transitions;
  co.generator.max_places = std::max<std::size_t>(10, a.max_transitions + 2);
  co.index = !a.no_index;
  co.settings = index_settings(c);
  auto t0 = std::chrono::steady_clock::now();
  auto ids = pql::bench::build_collection(store, co);
  std::chrono::duration<double> built = std::chrono::steady_clock::now() - t0;
  auto repo = pql::Repository::from_store(store);
  auto index = pql::RelationIndex::load(store);

  std::cout << "Templates:  " << a.templates << " (" << templates.size() << " templates, " << a.instances
            << " instances each)\n";
  std::cout << "Collection: " << ids.size() << " generated models, " << (a.no_index ? "not indexed" : "indexed")
            << " in " << ms(built.count()) << " ms\n";
  std::cout << "fraction  models  threads  queries  mean query ms  mean check ms\n";

  std::vector<double> xs, ys;
  for (double f : a.fractions) {
    std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(ids.size() * f / 100.0 + 0.5));
    auto part = pql::bench::subset(repo, std::vector<std::string>(ids.begin(), ids.begin() + std::min(n, ids.size())));
    for (auto k : a.threads) {
      pql::bench::Options o;
      o.instances = a.instances;
      o.threads = k;
      o.repeats = a.repeats;
      o.seed = a.seed;
      o.default_similarity = c.default_similarity;
      auto report = pql::bench::run(part, a.no_index ? nullptr : &index, templates, o);
      std::cout << std::setw(7) << f << "%  " << std::setw(6) << part.ids().size() << "  " << std::setw(7) << k
                << "  " << std::setw(7) << report.runs.size() << "  " << std::setw(13)
                << ms(report.mean_query_seconds()) << "  " << std::setw(13) << ms(report.mean_check_seconds())
                << "\n";
      for (const auto& [cat, mean] : report.mean_by_category())
        std::cout << "          category " << cat << ": mean query " << ms(mean) << " ms\n";
      if (k == a.threads.front()) {
        xs.push_back(static_cast<double>(part.ids().size()));
        ys.push_back(report.mean_query_seconds());
      }
    }
  }
  if (xs.size() >= 2) {
    auto fit = pql::bench::fit_line(xs, ys);
    std::cout << "Linear fit (query time vs models, " << a.threads.front() << " thread(s)): " << ms(fit.slope)
              << " ms/model, intercept " << ms(fit.intercept) << " ms, R^2 = " << std::setprecision(4) << fit.r2
              << "\n";
  }
  return kOk;
}

bool statement_complete(const std::string& buffer) {
  auto end = buffer.find_last_not_of(" \t\r\n");
  return end != std::string::npos && buffer[end] == ';' && buffer.find("SELECT") != std::string::npos;
}

int cmd_repl(const pql::Config& c) {
  bool interactive = ::isatty(STDIN_FILENO);
  if (interactive) std::cout << "PQL " << PQL_VERSION << " (store " << c.store.string() << "). End queries with ';', .quit to leave.\n";
  std::string buffer, line;
  for (;;) {
    if (interactive) std::cout << (buffer.empty() ? "pql> " : "...> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (buffer.empty() && (line == ".quit" || line == ".exit")) break;
    if (buffer.empty() && line.find_first_not_of(" \t\r") == std::string::npos) continue;
    buffer += line + "\n";
    if (!statement_complete(buffer)) continue;
    try {
      run_query_text(buffer, c, c.query_threads, true);
    } catch (const pql::query::ParseError& e) {
      std::cout << "parse error: " << e.what() << "\n";
    } catch (const pql::Error& e) {
      std::cout << "error: " << e.what() << "\n";
    }
    buffer.clear();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process model repository querying with PQL", "pql"};
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);
  Globals g;
  app.add_option("-c,--config", g.config_file, "Settings file (default: $PQL_CONFIG, then ./pql.ini)");
  app.add_option("--store", g.store_dir, "Store directory (overrides the store setting)");

  std::string pnml, id, pql_path, location = "/", list_location, inner, outer;
  std::vector<std::string> attributes;
  std::size_t threads = 0;
  bool no_index = false;

  auto* store = app.add_subcommand("store", "Store a PNML model, or every PNML file of a directory");
  store->add_option("--pnml", pnml, "PNML file or directory")->required();
  store->add_option("--id", id, "Identifier for a single model");
  store->add_option("-l,--location", location, "Location (folder path)");
  store->add_option("-a,--attribute", attributes, "Attribute NAME=VALUE (repeatable)");

  auto* check = app.add_subcommand("check", "Check whether a model is a sound workflow net");
  auto* check_id = check->add_option("--id", id, "Stored model");
  auto* check_pnml = check->add_option("--pnml", pnml, "PNML file instead of a stored model");
  check_id->excludes(check_pnml);
  check->callback([&] {
    if (id.empty() && pnml.empty()) throw CLI::RequiredError("--id or --pnml");
  });

  auto* index = app.add_subcommand("index", "Check and index a stored model now");
  index->add_option("--id", id, "Stored model")->required();

  auto* del = app.add_subcommand("delete", "Delete a stored model and its index");
  del->add_option("--id", id, "Stored model")->required();

  auto* list = app.add_subcommand("list", "List stored models with their index status");
  list->add_option("-l,--location", list_location, "Only models within this location");

  auto* nest = app.add_subcommand("nest", "Declare that one location is nested in another");
  nest->add_option("--inner", inner)->required();
  nest->add_option("--outer", outer)->required();

  auto* parse = app.add_subcommand("parse", "Print the canonical form and parse tree of a query");
  parse->add_option("--pql", pql_path, "Query file")->required()->check(CLI::ExistingFile);

  auto* query = app.add_subcommand("query", "Execute a query");
  query->add_option("--pql", pql_path, "Query file")->required()->check(CLI::ExistingFile);
  query->add_option("-t,--threads", threads, "Query threads (default: numberOfQueryThreads)")
      ->check(CLI::PositiveNumber);
  query->add_flag("--no-index", no_index, "Compute every predicate afresh");

  auto* reset = app.add_subcommand("reset", "Delete all stored models and indexes");
  auto* version = app.add_subcommand("version", "Print the version");

  std::string help_topic;
  auto* help = app.add_subcommand("help", "Show help for the tool or one subcommand");
  help->add_option("subcommand", help_topic);

  std::string bot_name = "bot";
  double bot_sleep = -1, bot_index = -1;
  bool bot_once = false;
  auto* bot = app.add_subcommand("bot", "Run an indexing bot against the store");
  bot->add_option("-n,--name", bot_name, "Bot name, recorded on claimed models");
  bot->add_option("-s,--sleep", bot_sleep, "Seconds to sleep when there are no pending jobs")
      ->check(CLI::NonNegativeNumber);
  bot->add_option("-i,--index", bot_index, "Maximum seconds to spend indexing one model")
      ->check(CLI::NonNegativeNumber);
  bot->add_flag("--once", bot_once, "Exit when there are no pending jobs");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time generated query instances on a generated collection");
  bench->add_option("--templates", ba.templates, "all, a category (1, 2, 3), group (2.a) or subgroup (3.b.4)");
  bench->add_option("--templates-dir", ba.templates_dir, "Directory of <subgroup>.pql files")
      ->check(CLI::ExistingDirectory);
  bench->add_option("--models", ba.models, "Collection size")->check(CLI::PositiveNumber);
  bench->add_option("--threads", ba.threads, "Thread counts to compare")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--fractions", ba.fractions, "Collection percentages, e.g. 25,50,75,100")
      ->delimiter(',')
      ->check(CLI::Range(1.0, 100.0));
  bench->add_option("--instances", ba.instances, "Instances per template")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", ba.repeats, "Evaluations per instance (fastest counts)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--max-transitions", ba.max_transitions, "Generated net size")->check(CLI::PositiveNumber);
  bench->add_option("--seed", ba.seed, "Random seed");
  bench->add_flag("--no-index", ba.no_index, "Skip indexing; every check is computed afresh");

  auto* repl = app.add_subcommand("repl", "Read queries from standard input and execute them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*version) {
      std::cout << "pql " << PQL_VERSION << "\n";
      return kOk;
    }
    if (*help) {
      if (help_topic.empty()) {
        std::cout << app.get_formatter()->make_help(&app, "pql", CLI::AppFormatMode::Normal);
        return kOk;
      }
      auto* sub = app.get_subcommand(help_topic);  // throws OptionNotFound
      std::cout << sub->help();
      return kOk;
    }
    auto c = g.config();
    if (*store) return cmd_store(c, pnml, id, location, attributes);
    if (*check) return cmd_check(c, id, pnml);
    if (*index) return cmd_index(c, id);
    if (*del) {
      pql::Store(c.store).remove(id);
      std::cout << "Deleted model with ID " << id << "\n";
      return kOk;
    }
    if (*list) return cmd_list(c, list_location);
    if (*nest) {
      pql::Store(c.store).declare_nesting(inner, outer);
      return kOk;
    }
    if (*parse) return cmd_parse(pql_path);
    if (*query) return run_query_text(read_file(pql_path), c, threads ? threads : c.query_threads, !no_index);
    if (*reset) {
      pql::Store(c.store).reset();
      std::cout << "Store reset\n";
      return kOk;
    }
    if (*bot)
      return cmd_bot(c, bot_name, bot_sleep >= 0 ? bot_sleep : c.bot_sleep_seconds,
                     bot_index >= 0 ? bot_index : c.max_index_seconds, bot_once);
    if (*bench) return cmd_bench(c, ba);
    if (*repl) return cmd_repl(c);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const pql::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const pql::query::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kDomain;
  } catch (const pql::StoreError& e) {
    std::cerr << "store error: " << e.what() << "\n";
    return kStoreFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "store error: " << e.what() << "\n";
    return kStoreFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
