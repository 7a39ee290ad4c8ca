#include <sstream>

#include "pql/query/parser.hpp"

namespace pql::query {

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return "string \"" + t.text + "\"";
    case TokenKind::Variable: return "variable " + t.text;
    case TokenKind::Number: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

std::string format_message(const std::string& message, const std::set<std::string>& expected) {
  if (expected.empty()) return message;
  std::string out = message + "; expected ";
  bool first = true;
  for (const auto& e : expected) {
    out += (first ? "" : ", ") + e;
    first = false;
  }
  return out;
}

// Thrown inside the parser; turned into a ParseError at the furthest position.
struct Mismatch {};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  Query run() {
    try {
      Query q = query();
      return q;
    } catch (const Mismatch&) {
      const auto& tok = t_[far_];
      throw ParseError(tok.line, tok.column, "unexpected " + describe(tok), far_expected_);
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(pos_ + ahead, t_.size() - 1)]; }

  bool is(const char* text, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return (t.kind == TokenKind::Keyword || t.kind == TokenKind::Punct) && t.text == text;
  }
  bool is(TokenKind k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }

  [[noreturn]] void fail(std::set<std::string> expected) {
    if (pos_ > far_ || (pos_ == far_ && far_expected_.empty())) {
      far_ = pos_;
      far_expected_ = std::move(expected);
    } else if (pos_ == far_) {
      far_expected_.insert(expected.begin(), expected.end());
    }
    throw Mismatch{};
  }

  bool accept(const char* text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* text) {
    if (!accept(text)) fail({std::string("'") + text + "'"});
  }
  std::string expect(TokenKind k, const char* what) {
    if (!is(k)) fail({what});
    return t_[pos_++].text;
  }

  std::optional<Predicate> predicate_name_here() const {
    if (!is(TokenKind::Keyword)) return std::nullopt;
    return predicate_from_name(peek().text);
  }

  Query query() {
    Query q;
    while (is(TokenKind::Variable)) {
      Variable v;
      v.name = t_[pos_++].text;
      expect("=");
      v.tasks = set_expr();
      expect(";");
      q.variables.push_back(std::move(v));
    }
    if (!is("SELECT")) fail({"'SELECT'", "variable"});
    ++pos_;
    do {
      if (accept("*")) q.attributes.emplace_back(std::nullopt);
      else q.attributes.emplace_back(expect(TokenKind::String, "attribute name"));
    } while (accept(","));
    expect("FROM");
    do {
      if (accept("*")) q.locations.emplace_back(std::nullopt);
      else q.locations.emplace_back(expect(TokenKind::String, "location path"));
    } while (accept(","));
    if (accept("WHERE")) q.predicate = or_expr();
    expect(";");
    if (!is(TokenKind::End)) fail({"end of input"});
    return q;
  }

  // ---- tasks and sets ----

  bool at_task() const { return is(TokenKind::String) || is("~"); }

  TaskExpr task() {
    TaskExpr t;
    if (accept("~")) t.kind = TaskExpr::Kind::DefSim;
    if (!is(TokenKind::String)) fail({"label string"});
    const auto& tok = t_[pos_++];
    if (tok.text.empty()) throw ParseError(tok.line, tok.column, "empty label");
    t.label = tok.text;
    if (t.kind == TaskExpr::Kind::Exact && accept("[")) {
      const auto& num = peek();
      if (!is(TokenKind::Number)) fail({"similarity"});
      ++pos_;
      double v = std::stod(num.text[0] == '.' ? "0" + num.text : num.text);
      if (v < 0 || v > 1) throw ParseError(num.line, num.column, "similarity " + num.text + " outside [0,1]");
      t.kind = TaskExpr::Kind::Sim;
      t.similarity = v;
      t.similarity_text = num.text;
      expect("]");
    }
    return t;
  }

  SetExpr set_expr() {
    std::vector<SetExpr> ops;
    ops.push_back(intersect_expr());
    while (accept("UNION")) ops.push_back(intersect_expr());
    if (ops.size() == 1) return std::move(ops[0]);
    return SetExpr{SetOperation{SetOperation::Op::Union, std::move(ops)}};
  }

  SetExpr intersect_expr() {
    std::vector<SetExpr> ops;
    ops.push_back(except_expr());
    while (accept("INTERSECT")) ops.push_back(except_expr());
    if (ops.size() == 1) return std::move(ops[0]);
    return SetExpr{SetOperation{SetOperation::Op::Intersect, std::move(ops)}};
  }

  SetExpr except_expr() {
    std::vector<SetExpr> ops;
    ops.push_back(set_primary());
    while (accept("EXCEPT")) ops.push_back(set_primary());
    if (ops.size() == 1) return std::move(ops[0]);
    return SetExpr{SetOperation{SetOperation::Op::Except, std::move(ops)}};
  }

  Quantifier any_all() {
    if (accept("ANY")) return Quantifier::Any;
    if (accept("ALL")) return Quantifier::All;
    fail({"'ANY'", "'ALL'"});
  }

  Quantifier any_some_each_all() {
    if (accept("ANY")) return Quantifier::Any;
    if (accept("SOME")) return Quantifier::Some;
    if (accept("EACH")) return Quantifier::Each;
    if (accept("ALL")) return Quantifier::All;
    fail({"'ANY'", "'SOME'", "'EACH'", "'ALL'"});
  }

  SetExpr set_primary() {
    if (is(TokenKind::Variable)) return SetExpr{VarRef{t_[pos_++].text}};
    if (accept("{")) {
      TaskLiteral lit;
      if (!is("}")) {
        do lit.tasks.push_back(task());
        while (accept(","));
      }
      expect("}");
      return SetExpr{std::move(lit)};
    }
    if (accept("GetTasks")) {
      if (accept("(")) {
        expect(")");
        return SetExpr{AllTasks{}};
      }
      auto p = predicate_name_here();
      if (!p) fail({"'('", "predicate name"});
      ++pos_;
      expect("(");
      if (is_unary(*p)) {
        auto s = set_expr();
        expect(")");
        return SetExpr{UnaryConstruction{*p, std::move(s)}};
      }
      auto s1 = set_expr();
      expect(",");
      auto s2 = set_expr();
      expect(",");
      auto q = any_all();
      expect(")");
      return SetExpr{BinaryConstruction{*p, std::move(s1), std::move(s2), q}};
    }
    if (accept("(")) {
      if (accept("*")) {
        expect(")");
        return SetExpr{AllTasks{}};
      }
      auto s = set_expr();
      expect(")");
      return s;
    }
    fail({"variable", "'{'", "'GetTasks'", "'('"});
  }

  // ---- predicates ----

  PredExpr or_expr() {
    std::vector<PredExpr> ops;
    ops.push_back(and_expr());
    while (accept("OR")) ops.push_back(and_expr());
    if (ops.size() == 1) return std::move(ops[0]);
    return PredExpr{Disjunction{std::move(ops)}};
  }

  PredExpr and_expr() {
    std::vector<PredExpr> ops;
    ops.push_back(test_expr());
    while (accept("AND")) ops.push_back(test_expr());
    if (ops.size() == 1) return std::move(ops[0]);
    return PredExpr{Conjunction{std::move(ops)}};
  }

  PredExpr test_expr() {
    auto p = proposition();
    if (is("IS") && (is("TRUE", 1) || is("FALSE", 1) || is("NOT", 1))) {
      ++pos_;
      bool negated = accept("NOT");
      LogicalTest::Kind kind;
      if (accept("TRUE")) kind = negated ? LogicalTest::Kind::IsNotTrue : LogicalTest::Kind::IsTrue;
      else if (accept("FALSE")) kind = negated ? LogicalTest::Kind::IsNotFalse : LogicalTest::Kind::IsFalse;
      else fail({"'TRUE'", "'FALSE'"});
      return PredExpr{LogicalTest{std::move(p), kind}};
    }
    return p;
  }

  SetComparison::Op comparison_op() {
    if (accept("EQUALS")) return SetComparison::Op::Identical;
    if (accept("NOT")) {
      expect("EQUALS");
      return SetComparison::Op::Different;
    }
    if (accept("OVERLAPS")) {
      expect("WITH");
      return SetComparison::Op::OverlapsWith;
    }
    if (accept("IS")) {
      bool proper = accept("PROPER");
      expect("SUBSET");
      expect("OF");
      return proper ? SetComparison::Op::ProperSubsetOf : SetComparison::Op::SubsetOf;
    }
    fail({"'EQUALS'", "'NOT'", "'OVERLAPS'", "'IS'"});
  }

  PredExpr set_comparison() {
    auto lhs = set_expr();
    auto op = comparison_op();
    auto rhs = set_expr();
    return PredExpr{SetComparison{std::move(lhs), op, std::move(rhs)}};
  }

  PredExpr proposition() {
    if (accept("NOT")) return PredExpr{Negation{proposition()}};
    if (accept("TRUE")) return PredExpr{TruthValue{true}};
    if (accept("FALSE")) return PredExpr{TruthValue{false}};
    if (auto p = predicate_name_here()) {
      ++pos_;
      return predicate_call(*p);
    }
    if (at_task()) {
      auto t = task();
      expect("IN");
      return PredExpr{TaskIn{std::move(t), set_expr()}};
    }
    if (is("(")) {
      // Either a parenthesized set opening a comparison or a parenthesized predicate.
      auto save = pos_;
      try {
        return set_comparison();
      } catch (const Mismatch&) {
        pos_ = save;
      }
      expect("(");
      auto p = or_expr();
      expect(")");
      return p;
    }
    if (is(TokenKind::Variable) || is("{") || is("GetTasks")) return set_comparison();
    fail({"predicate", "'NOT'", "'TRUE'", "'FALSE'", "label string", "'('", "variable", "'{'", "'GetTasks'"});
  }

  bool at_set() const { return is(TokenKind::Variable) || is("{") || is("GetTasks") || is("("); }

  void require_task_or_set() {
    if (!at_task() && !at_set()) fail({"label string", "variable", "'{'", "'GetTasks'", "'('"});
  }

  PredExpr predicate_call(Predicate p) {
    expect("(");
    require_task_or_set();
    if (is_unary(p)) {
      if (at_task()) {
        auto t = task();
        expect(")");
        return PredExpr{UnaryPredicate{p, std::move(t)}};
      }
      auto s = set_expr();
      expect(",");
      auto q = any_all();
      expect(")");
      return PredExpr{UnaryMacro{p, std::move(s), q}};
    }
    if (at_task()) {
      auto t1 = task();
      expect(",");
      require_task_or_set();
      if (at_task()) {
        auto t2 = task();
        expect(")");
        return PredExpr{BinaryPredicate{p, std::move(t1), std::move(t2)}};
      }
      auto s = set_expr();
      expect(",");
      auto q = any_all();
      expect(")");
      return PredExpr{TaskSetMacro{p, std::move(t1), std::move(s), q}};
    }
    auto s1 = set_expr();
    expect(",");
    auto s2 = set_expr();
    expect(",");
    auto q = any_some_each_all();
    expect(")");
    return PredExpr{SetSetMacro{p, std::move(s1), std::move(s2), q}};
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::size_t far_ = 0;
  std::set<std::string> far_expected_;
};

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string message, std::set<std::string> expected)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            format_message(message, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::string_view quantifier_name(Quantifier q) {
  switch (q) {
    case Quantifier::Any: return "ANY";
    case Quantifier::Some: return "SOME";
    case Quantifier::Each: return "EACH";
    case Quantifier::All: return "ALL";
  }
  return "?";
}

Query parse(const std::string& text) { return Parser(tokenize(text)).run(); }

}  // namespace pql::query
