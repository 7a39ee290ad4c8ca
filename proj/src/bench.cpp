#include "pql/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <regex>

#include "pql/error.hpp"
#include "pql/pnml.hpp"
#include "pql/query/evaluator.hpp"
#include "pql/query/parser.hpp"

namespace pql::bench {

namespace {

const std::regex& placeholder() {
  static const std::regex re(R"(\{L([0-9]+)\})");
  return re;
}

std::string escape(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<Template> load_templates(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) throw Error("template directory not found: " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pql") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Template> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line.compare(first, 2, "--") == 0) continue;
      out.push_back({f.stem().string(), line.substr(first)});
    }
  }
  return out;
}

std::vector<Template> select_templates(const std::vector<Template>& all, const std::string& filter) {
  if (filter == "all") return all;
  std::vector<Template> out;
  for (const auto& t : all)
    if (t.code == filter || t.code.rfind(filter + ".", 0) == 0) out.push_back(t);
  return out;
}

std::size_t placeholder_count(const std::string& text) {
  std::size_t n = 0;
  for (std::sregex_iterator it(text.begin(), text.end(), placeholder()), end; it != end; ++it)
    n = std::max<std::size_t>(n, std::stoul((*it)[1].str()));
  return n;
}

std::string instantiate(const std::string& text, const std::vector<std::string>& labels, std::mt19937_64& rng) {
  if (labels.empty()) throw Error("no labels to instantiate templates with");
  std::size_t n = placeholder_count(text);
  std::vector<std::string> pool = labels;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::string> chosen;
  std::uniform_int_distribution<std::size_t> any(0, labels.size() - 1);
  for (std::size_t i = 0; i < n; ++i) chosen.push_back(i < pool.size() ? pool[i] : labels[any(rng)]);

  std::string out;
  auto last = text.cbegin();
  for (std::sregex_iterator it(text.begin(), text.end(), placeholder()), end; it != end; ++it) {
    out.append(last, (*it)[0].first);
    out += escape(chosen[std::stoul((*it)[1].str()) - 1]);
    last = (*it)[0].second;
  }
  out.append(last, text.cend());
  return out;
}

std::vector<std::string> build_collection(Store& store, const CollectionOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < options.models; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    auto id = options.id_prefix + buf;
    auto net = random_sound_net(rng, options.generator);
    store.store_model(id, write_pnml(net, id));
    ids.push_back(id);
  }
  if (options.index)
    for (const auto& id : ids) index_model(store, id, options.settings, "bench");
  return ids;
}

Repository subset(const Repository& repo, const std::vector<std::string>& ids) {
  Repository out;
  for (const auto& id : ids) out.add(repo.record(id), repo.system(id));
  return out;
}

double Report::mean_query_seconds() const {
  if (runs.empty()) return 0;
  double s = 0;
  for (const auto& r : runs) s += r.seconds;
  return s / runs.size();
}

double Report::mean_check_seconds() const {
  double s = 0;
  std::size_t checks = 0;
  for (const auto& r : runs) {
    s += r.seconds;
    checks += r.models;
  }
  return checks ? s / checks : 0;
}

std::map<char, double> Report::mean_by_category() const {
  std::map<char, std::pair<double, std::size_t>> acc;
  for (const auto& r : runs) {
    auto& a = acc[r.code.empty() ? '?' : r.code[0]];
    a.first += r.seconds;
    ++a.second;
  }
  std::map<char, double> out;
  for (const auto& [c, a] : acc) out[c] = a.first / a.second;
  return out;
}

Report run(const Repository& repo, const RelationIndex* index, const std::vector<Template>& templates,
           const Options& options) {
  std::vector<std::string> labels(repo.vocabulary().begin(), repo.vocabulary().end());
  std::mt19937_64 rng(options.seed);
  PredicateEngine engine(repo, index);
  query::EvalOptions eval{options.default_similarity, options.threads};

  Report report;
  report.threads = options.threads;
  report.models = repo.ids().size();
  for (const auto& t : templates) {
    for (std::size_t k = 0; k < options.instances; ++k) {
      Run r;
      r.code = t.code;
      r.query = instantiate(t.text, labels, rng);
      auto q = query::parse(r.query);
      r.seconds = std::numeric_limits<double>::infinity();
      for (std::size_t rep = 0; rep < std::max<std::size_t>(1, options.repeats); ++rep) {
        auto start = std::chrono::steady_clock::now();
        auto result = query::evaluate(q, repo, engine, eval);
        std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        r.seconds = std::min(r.seconds, took.count());
        r.matches = result.rows.size();
        r.errors = result.errors.size();
      }
      r.models = repo.ids().size();
      report.runs.push_back(std::move(r));
    }
  }
  return report;
}

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("fit_line needs two or more points");
  double n = xs.size();
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : (syy == 0 ? 1.0 : 0.0);
  return f;
}

}  // namespace pql::bench
