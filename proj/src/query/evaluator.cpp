#include "pql/query/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "pql/error.hpp"
#include "pql/query/parser.hpp"

namespace pql::query {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// ---- static checks and task collection ----

struct Walker {
  std::set<std::string> declared;
  std::vector<const TaskExpr*> tasks;

  void task(const TaskExpr& t) { tasks.push_back(&t); }

  void set(const SetExpr& s) {
    std::visit(overloaded{
                   [&](const VarRef& v) {
                     if (!declared.count(v.name)) throw EvaluationError("undeclared variable: " + v.name);
                   },
                   [&](const AllTasks&) {},
                   [&](const TaskLiteral& l) {
                     for (const auto& t : l.tasks) task(t);
                   },
                   [&](const UnaryConstruction& c) { set(*c.tasks); },
                   [&](const BinaryConstruction& c) {
                     set(*c.tasks1);
                     set(*c.tasks2);
                   },
                   [&](const SetOperation& o) {
                     for (const auto& x : o.operands) set(x);
                   },
               },
               s.node);
  }

  void pred(const PredExpr& p) {
    std::visit(overloaded{
                   [&](const UnaryPredicate& u) { task(u.task); },
                   [&](const BinaryPredicate& b) {
                     task(b.task1);
                     task(b.task2);
                   },
                   [&](const UnaryMacro& m) { set(m.tasks); },
                   [&](const TaskSetMacro& m) {
                     task(m.task);
                     set(m.tasks);
                   },
                   [&](const SetSetMacro& m) {
                     set(m.tasks1);
                     set(m.tasks2);
                   },
                   [&](const TaskIn& t) {
                     task(t.task);
                     set(t.tasks);
                   },
                   [&](const SetComparison& c) {
                     set(c.lhs);
                     set(c.rhs);
                   },
                   [&](const TruthValue&) {},
                   [&](const Negation& n) { pred(*n.operand); },
                   [&](const Conjunction& c) {
                     for (const auto& x : c.operands) pred(x);
                   },
                   [&](const Disjunction& c) {
                     for (const auto& x : c.operands) pred(x);
                   },
                   [&](const LogicalTest& t) { pred(*t.operand); },
               },
               p.node);
  }

  void query(const Query& q) {
    for (const auto& v : q.variables) {
      set(v.tasks);
      declared.insert(v.name);
    }
    if (q.predicate) pred(*q.predicate);
  }
};

// ---- per-model evaluation ----

using Resolved = std::map<const TaskExpr*, Task>;

class ModelEval {
 public:
  ModelEval(const Resolved& resolved, PredicateEngine::Model& model) : resolved_(resolved), model_(model) {}

  bool matches(const Query& q) {
    for (const auto& v : q.variables) {
      auto value = set(v.tasks);  // sees earlier declarations only
      vars_[v.name] = std::move(value);
    }
    return !q.predicate || pred(*q.predicate);
  }

 private:
  const Task& task(const TaskExpr& t) { return resolved_.at(&t); }

  bool unary(Predicate p, const Task& x) { return model_.evaluate(p, x); }
  bool binary(Predicate p, const Task& x, const Task& y) { return model_.evaluate(p, x, &y); }

  bool exists_with(Predicate p, const Task& x, const TaskSet& ys) {
    return std::any_of(ys.begin(), ys.end(), [&](const Task& y) { return binary(p, x, y); });
  }
  bool all_with(Predicate p, const Task& x, const TaskSet& ys) {
    return std::all_of(ys.begin(), ys.end(), [&](const Task& y) { return binary(p, x, y); });
  }

  TaskSet set(const SetExpr& s) {
    return std::visit(
        overloaded{
            [&](const VarRef& v) { return vars_.at(v.name); },
            [&](const AllTasks&) {
              TaskSet out;
              for (const auto& l : model_.labels()) out.insert(Task{l});
              return out;
            },
            [&](const TaskLiteral& l) {
              TaskSet out;
              for (const auto& t : l.tasks) out.insert(task(t));
              return out;
            },
            [&](const UnaryConstruction& c) {
              TaskSet out;
              for (const auto& t : set(*c.tasks))
                if (unary(c.name, t)) out.insert(t);
              return out;
            },
            [&](const BinaryConstruction& c) {
              auto xs = set(*c.tasks1), ys = set(*c.tasks2);
              TaskSet out;
              for (const auto& x : xs)
                if (c.quantifier == Quantifier::All ? all_with(c.name, x, ys) : exists_with(c.name, x, ys))
                  out.insert(x);
              return out;
            },
            [&](const SetOperation& o) { return set_operation(o); },
        },
        s.node);
  }

  TaskSet set_operation(const SetOperation& o) {
    std::vector<TaskSet> vals;
    for (const auto& x : o.operands) vals.push_back(set(x));
    TaskSet acc;
    switch (o.op) {
      case SetOperation::Op::Union:
        for (auto& v : vals) acc.insert(v.begin(), v.end());
        return acc;
      case SetOperation::Op::Intersect:
        acc = vals[0];
        for (std::size_t i = 1; i < vals.size(); ++i) {
          TaskSet next;
          std::set_intersection(acc.begin(), acc.end(), vals[i].begin(), vals[i].end(),
                                std::inserter(next, next.end()));
          acc = std::move(next);
        }
        return acc;
      case SetOperation::Op::Except:
        acc = vals.back();
        for (std::size_t i = vals.size() - 1; i-- > 0;) {
          TaskSet next;
          std::set_difference(vals[i].begin(), vals[i].end(), acc.begin(), acc.end(), std::inserter(next, next.end()));
          acc = std::move(next);
        }
        return acc;
    }
    return acc;
  }

  bool pred(const PredExpr& p) {
    return std::visit(
        overloaded{
            [&](const UnaryPredicate& u) { return unary(u.name, task(u.task)); },
            [&](const BinaryPredicate& b) { return binary(b.name, task(b.task1), task(b.task2)); },
            [&](const UnaryMacro& m) {
              auto ts = set(m.tasks);
              auto f = [&](const Task& t) { return unary(m.name, t); };
              return m.quantifier == Quantifier::All ? std::all_of(ts.begin(), ts.end(), f)
                                                     : std::any_of(ts.begin(), ts.end(), f);
            },
            [&](const TaskSetMacro& m) {
              auto ys = set(m.tasks);
              const auto& x = task(m.task);
              return m.quantifier == Quantifier::All ? all_with(m.name, x, ys) : exists_with(m.name, x, ys);
            },
            [&](const SetSetMacro& m) {
              auto xs = set(m.tasks1), ys = set(m.tasks2);
              auto some_y = [&](const Task& x) { return exists_with(m.name, x, ys); };
              auto every_y = [&](const Task& x) { return all_with(m.name, x, ys); };
              switch (m.quantifier) {
                case Quantifier::Any: return std::any_of(xs.begin(), xs.end(), some_y);
                case Quantifier::Some: return std::any_of(xs.begin(), xs.end(), every_y);
                case Quantifier::Each: return std::all_of(xs.begin(), xs.end(), some_y);
                case Quantifier::All: return std::all_of(xs.begin(), xs.end(), every_y);
              }
              return false;
            },
            [&](const TaskIn& t) { return set(t.tasks).count(task(t.task)) > 0; },
            [&](const SetComparison& c) {
              auto a = set(c.lhs), b = set(c.rhs);
              switch (c.op) {
                case SetComparison::Op::Identical: return a == b;
                case SetComparison::Op::Different: return a != b;
                case SetComparison::Op::OverlapsWith:
                  return std::any_of(a.begin(), a.end(), [&](const Task& t) { return b.count(t) > 0; });
                case SetComparison::Op::SubsetOf: return std::includes(b.begin(), b.end(), a.begin(), a.end());
                case SetComparison::Op::ProperSubsetOf:
                  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
              }
              return false;
            },
            [&](const TruthValue& t) { return t.value; },
            [&](const Negation& n) { return !pred(*n.operand); },
            [&](const Conjunction& c) {
              return std::all_of(c.operands.begin(), c.operands.end(), [&](const PredExpr& x) { return pred(x); });
            },
            [&](const Disjunction& c) {
              return std::any_of(c.operands.begin(), c.operands.end(), [&](const PredExpr& x) { return pred(x); });
            },
            [&](const LogicalTest& t) {
              bool v = pred(*t.operand);
              return (t.kind == LogicalTest::Kind::IsTrue || t.kind == LogicalTest::Kind::IsNotFalse) ? v : !v;
            },
        },
        p.node);
  }

  const Resolved& resolved_;
  PredicateEngine::Model& model_;
  std::map<std::string, TaskSet> vars_;
};

}  // namespace

std::vector<std::string> QueryResult::ids() const {
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.id);
  return out;
}

void check_variables(const Query& q) { Walker().query(q); }

Task resolve_task(const TaskExpr& t, double default_similarity, const Vocabulary& vocab) {
  switch (t.kind) {
    case TaskExpr::Kind::Exact: return {t.label};
    case TaskExpr::Kind::DefSim: return similar(t.label, default_similarity, vocab);
    case TaskExpr::Kind::Sim: return similar(t.label, t.similarity, vocab);
  }
  return {t.label};
}

QueryResult evaluate(const Query& q, const Repository& repo, const PredicateEngine& engine,
                     const EvalOptions& options) {
  Walker walker;
  walker.query(q);

  QueryResult result;
  Resolved resolved;
  std::map<std::string, Task> by_text;
  for (const auto* t : walker.tasks) {
    auto key = pretty_print(*t);
    auto it = by_text.find(key);
    if (it == by_text.end()) {
      it = by_text.emplace(key, resolve_task(*t, options.default_similarity, repo.vocabulary())).first;
      result.tasks.push_back({key, it->second});
    }
    resolved.emplace(t, it->second);
  }

  // Attributes: Universe means every name the repository knows.
  std::vector<std::string> names;
  auto add_name = [&](const std::string& n) {
    if (repo.supports_attribute(n) && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  };
  for (const auto& a : q.attributes) {
    if (!a) {
      for (const auto& n : repo.attribute_names()) add_name(n);
    } else {
      add_name(*a);
    }
  }
  result.attributes = names;

  bool anywhere = std::any_of(q.locations.begin(), q.locations.end(), [](const auto& l) { return !l; });
  std::vector<std::string> candidates;
  for (const auto& id : repo.ids()) {
    bool inside = anywhere || std::any_of(q.locations.begin(), q.locations.end(), [&](const auto& l) {
                    return repo.nested(repo.location(id), *l);
                  });
    if (inside) candidates.push_back(id);
  }

  std::vector<char> keep(candidates.size(), 0);
  std::vector<std::string> failure(candidates.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < candidates.size();) {
      try {
        auto model = engine.model(candidates[i]);
        keep[i] = ModelEval(resolved, model).matches(q);
      } catch (const Error& e) {
        failure[i] = e.what();
      } catch (const std::exception& e) {
        failure[i] = e.what();
      }
    }
  };
  std::size_t n = std::max<std::size_t>(1, std::min(options.threads, candidates.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!failure[i].empty()) {
      result.errors[candidates[i]] = failure[i];
      continue;
    }
    if (!keep[i]) continue;
    ResultRow row{candidates[i], {}};
    for (const auto& name : names)
      if (auto v = repo.attribute(candidates[i], name)) row.attributes.emplace_back(name, *v);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace pql::query
