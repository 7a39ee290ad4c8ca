#include <cstdio>
#include <sstream>

#include "pql/query/parser.hpp"

namespace pql::query {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string similarity_text(const TaskExpr& t) {
  if (!t.similarity_text.empty()) return t.similarity_text;
  std::ostringstream out;
  out << t.similarity;
  return out.str();
}

std::string_view op_keyword(SetOperation::Op op) {
  switch (op) {
    case SetOperation::Op::Union: return "UNION";
    case SetOperation::Op::Intersect: return "INTERSECT";
    case SetOperation::Op::Except: return "EXCEPT";
  }
  return "?";
}

std::string_view comparison_keyword(SetComparison::Op op) {
  switch (op) {
    case SetComparison::Op::Identical: return "EQUALS";
    case SetComparison::Op::Different: return "NOT EQUALS";
    case SetComparison::Op::OverlapsWith: return "OVERLAPS WITH";
    case SetComparison::Op::SubsetOf: return "IS SUBSET OF";
    case SetComparison::Op::ProperSubsetOf: return "IS PROPER SUBSET OF";
  }
  return "?";
}

std::string_view test_keyword(LogicalTest::Kind k) {
  switch (k) {
    case LogicalTest::Kind::IsTrue: return "IS TRUE";
    case LogicalTest::Kind::IsNotTrue: return "IS NOT TRUE";
    case LogicalTest::Kind::IsFalse: return "IS FALSE";
    case LogicalTest::Kind::IsNotFalse: return "IS NOT FALSE";
  }
  return "?";
}

std::string set_operand(const SetExpr& s) {
  if (std::holds_alternative<SetOperation>(s.node)) return "(" + pretty_print(s) + ")";
  return pretty_print(s);
}

// Wraps anything that is not a plain proposition.
std::string pred_operand(const PredExpr& p, bool allow_and, bool allow_test) {
  bool wrap = std::holds_alternative<Disjunction>(p.node) ||
              (!allow_and && std::holds_alternative<Conjunction>(p.node)) ||
              (!allow_test && std::holds_alternative<LogicalTest>(p.node));
  return wrap ? "(" + pretty_print(p) + ")" : pretty_print(p);
}

std::string task_label(const TaskExpr& t) {
  switch (t.kind) {
    case TaskExpr::Kind::Exact: return "Exact " + quote(t.label);
    case TaskExpr::Kind::DefSim: return "DefSim " + quote(t.label);
    case TaskExpr::Kind::Sim: return "Sim " + quote(t.label) + " " + similarity_text(t);
  }
  return "?";
}

class TreeWriter {
 public:
  std::string str() const { return out_.str(); }

  void line(int depth, const std::string& text) { out_ << std::string(depth * 2, ' ') << text << '\n'; }

  void task(int d, const TaskExpr& t) { line(d, "Task " + task_label(t)); }

  void set(int d, const SetExpr& s) {
    std::visit(overloaded{
                   [&](const VarRef& v) { line(d, "Variable " + v.name); },
                   [&](const AllTasks&) { line(d, "SetOfAllTasks"); },
                   [&](const TaskLiteral& l) {
                     line(d, "SetOfTasksLiteral");
                     for (const auto& t : l.tasks) task(d + 1, t);
                   },
                   [&](const UnaryConstruction& c) {
                     line(d, "UnaryPredicateConstruction " + std::string(predicate_name(c.name)));
                     set(d + 1, *c.tasks);
                   },
                   [&](const BinaryConstruction& c) {
                     line(d, "BinaryPredicateConstruction " + std::string(predicate_name(c.name)) + " " +
                                 std::string(quantifier_name(c.quantifier)));
                     set(d + 1, *c.tasks1);
                     set(d + 1, *c.tasks2);
                   },
                   [&](const SetOperation& o) {
                     static const char* names[] = {"Union", "Intersection", "Difference"};
                     line(d, names[static_cast<int>(o.op)]);
                     for (const auto& x : o.operands) set(d + 1, x);
                   },
               },
               s.node);
  }

  void pred(int d, const PredExpr& p) {
    std::visit(overloaded{
                   [&](const UnaryPredicate& u) {
                     line(d, "UnaryPredicate " + std::string(predicate_name(u.name)));
                     task(d + 1, u.task);
                   },
                   [&](const BinaryPredicate& b) {
                     line(d, "BinaryPredicate " + std::string(predicate_name(b.name)));
                     task(d + 1, b.task1);
                     task(d + 1, b.task2);
                   },
                   [&](const UnaryMacro& m) {
                     line(d, "UnaryPredicateMacro " + std::string(predicate_name(m.name)) + " " +
                                 std::string(quantifier_name(m.quantifier)));
                     set(d + 1, m.tasks);
                   },
                   [&](const TaskSetMacro& m) {
                     line(d, "BinaryPredicateMacroTaskSet " + std::string(predicate_name(m.name)) + " " +
                                 std::string(quantifier_name(m.quantifier)));
                     task(d + 1, m.task);
                     set(d + 1, m.tasks);
                   },
                   [&](const SetSetMacro& m) {
                     line(d, "BinaryPredicateMacroSetSet " + std::string(predicate_name(m.name)) + " " +
                                 std::string(quantifier_name(m.quantifier)));
                     set(d + 1, m.tasks1);
                     set(d + 1, m.tasks2);
                   },
                   [&](const TaskIn& t) {
                     line(d, "TaskInSetOfTasks");
                     task(d + 1, t.task);
                     set(d + 1, t.tasks);
                   },
                   [&](const SetComparison& c) {
                     static const char* names[] = {"Identical", "Different", "OverlapsWith", "SubsetOf",
                                                   "ProperSubsetOf"};
                     line(d, std::string("SetComparison ") + names[static_cast<int>(c.op)]);
                     set(d + 1, c.lhs);
                     set(d + 1, c.rhs);
                   },
                   [&](const TruthValue& t) { line(d, t.value ? "True" : "False"); },
                   [&](const Negation& n) {
                     line(d, "Negation");
                     pred(d + 1, *n.operand);
                   },
                   [&](const Conjunction& c) {
                     line(d, "Conjunction");
                     for (const auto& x : c.operands) pred(d + 1, x);
                   },
                   [&](const Disjunction& c) {
                     line(d, "Disjunction");
                     for (const auto& x : c.operands) pred(d + 1, x);
                   },
                   [&](const LogicalTest& t) {
                     static const char* names[] = {"IsTrue", "IsNotTrue", "IsFalse", "IsNotFalse"};
                     line(d, names[static_cast<int>(t.kind)]);
                     pred(d + 1, *t.operand);
                   },
               },
               p.node);
  }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string pretty_print(const TaskExpr& t) {
  switch (t.kind) {
    case TaskExpr::Kind::Exact: return quote(t.label);
    case TaskExpr::Kind::DefSim: return "~" + quote(t.label);
    case TaskExpr::Kind::Sim: return quote(t.label) + "[" + similarity_text(t) + "]";
  }
  return "?";
}

std::string pretty_print(const SetExpr& s) {
  return std::visit(
      overloaded{
          [](const VarRef& v) { return v.name; },
          [](const AllTasks&) { return std::string("GetTasks()"); },
          [](const TaskLiteral& l) {
            std::string out = "{";
            for (std::size_t i = 0; i < l.tasks.size(); ++i) out += (i ? "," : "") + pretty_print(l.tasks[i]);
            return out + "}";
          },
          [](const UnaryConstruction& c) {
            return "GetTasks" + std::string(predicate_name(c.name)) + "(" + pretty_print(*c.tasks) + ")";
          },
          [](const BinaryConstruction& c) {
            return "GetTasks" + std::string(predicate_name(c.name)) + "(" + pretty_print(*c.tasks1) + "," +
                   pretty_print(*c.tasks2) + "," + std::string(quantifier_name(c.quantifier)) + ")";
          },
          [](const SetOperation& o) {
            std::string out;
            for (std::size_t i = 0; i < o.operands.size(); ++i) {
              if (i) out += " " + std::string(op_keyword(o.op)) + " ";
              out += set_operand(o.operands[i]);
            }
            return out;
          },
      },
      s.node);
}

std::string pretty_print(const PredExpr& p) {
  return std::visit(
      overloaded{
          [](const UnaryPredicate& u) {
            return std::string(predicate_name(u.name)) + "(" + pretty_print(u.task) + ")";
          },
          [](const BinaryPredicate& b) {
            return std::string(predicate_name(b.name)) + "(" + pretty_print(b.task1) + "," + pretty_print(b.task2) +
                   ")";
          },
          [](const UnaryMacro& m) {
            return std::string(predicate_name(m.name)) + "(" + pretty_print(m.tasks) + "," +
                   std::string(quantifier_name(m.quantifier)) + ")";
          },
          [](const TaskSetMacro& m) {
            return std::string(predicate_name(m.name)) + "(" + pretty_print(m.task) + "," + pretty_print(m.tasks) +
                   "," + std::string(quantifier_name(m.quantifier)) + ")";
          },
          [](const SetSetMacro& m) {
            return std::string(predicate_name(m.name)) + "(" + pretty_print(m.tasks1) + "," +
                   pretty_print(m.tasks2) + "," + std::string(quantifier_name(m.quantifier)) + ")";
          },
          [](const TaskIn& t) { return pretty_print(t.task) + " IN " + pretty_print(t.tasks); },
          [](const SetComparison& c) {
            return pretty_print(c.lhs) + " " + std::string(comparison_keyword(c.op)) + " " + pretty_print(c.rhs);
          },
          [](const TruthValue& t) { return std::string(t.value ? "TRUE" : "FALSE"); },
          [](const Negation& n) { return "NOT " + pred_operand(*n.operand, false, false); },
          [](const Conjunction& c) {
            std::string out;
            for (std::size_t i = 0; i < c.operands.size(); ++i)
              out += (i ? " AND " : "") + pred_operand(c.operands[i], false, true);
            return out;
          },
          [](const Disjunction& c) {
            std::string out;
            for (std::size_t i = 0; i < c.operands.size(); ++i) {
              const auto& x = c.operands[i];
              // Nested disjunctions came from parentheses; keep them.
              out += (i ? " OR " : "") + pred_operand(x, true, true);
            }
            return out;
          },
          [](const LogicalTest& t) { return pred_operand(*t.operand, false, false) + " " + std::string(test_keyword(t.kind)); },
      },
      p.node);
}

std::string pretty_print(const Query& q) {
  std::string out;
  for (const auto& v : q.variables) out += v.name + " = " + pretty_print(v.tasks) + "; ";
  out += "SELECT ";
  for (std::size_t i = 0; i < q.attributes.size(); ++i)
    out += (i ? "," : "") + (q.attributes[i] ? quote(*q.attributes[i]) : std::string("*"));
  out += " FROM ";
  for (std::size_t i = 0; i < q.locations.size(); ++i)
    out += (i ? "," : "") + (q.locations[i] ? quote(*q.locations[i]) : std::string("*"));
  if (q.predicate) out += " WHERE " + pretty_print(*q.predicate);
  return out + ";";
}

std::string dump_parse_tree(const Query& q) {
  TreeWriter w;
  w.line(0, "Query");
  w.line(1, "Variables");
  for (const auto& v : q.variables) {
    w.line(2, "Variable " + v.name);
    w.set(3, v.tasks);
  }
  w.line(1, "Attributes");
  for (const auto& a : q.attributes) w.line(2, a ? "Attribute " + quote(*a) : std::string("Universe"));
  w.line(1, "Locations");
  for (const auto& l : q.locations) w.line(2, l ? "Location " + quote(*l) : std::string("Universe"));
  if (q.predicate) {
    w.line(1, "Predicate");
    w.pred(2, *q.predicate);
  }
  return w.str();
}

}  // namespace pql::query
