#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pql/relations.hpp"

namespace pql::query {

// Owning pointer with value semantics, so recursive nodes copy and compare
// by content.
template <class T>
class Box {
 public:
  Box(T value) : p_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *p_; }
  const T* operator->() const { return p_.get(); }
  bool operator==(const Box& o) const { return *p_ == *o.p_; }

 private:
  std::unique_ptr<T> p_;
};

struct TaskExpr {
  enum class Kind { Exact, DefSim, Sim };
  Kind kind = Kind::Exact;
  std::string label;
  double similarity = 1.0;     // Sim only
  std::string similarity_text;  // as written, for printing

  bool operator==(const TaskExpr& o) const {
    return kind == o.kind && label == o.label && (kind != Kind::Sim || similarity == o.similarity);
  }
};

enum class Quantifier { Any, Some, Each, All };

struct SetExpr;

struct VarRef {
  std::string name;
  bool operator==(const VarRef&) const = default;
};
struct AllTasks {
  bool operator==(const AllTasks&) const = default;
};
struct TaskLiteral {
  std::vector<TaskExpr> tasks;
  bool operator==(const TaskLiteral&) const = default;
};
struct UnaryConstruction {
  Predicate name;
  Box<SetExpr> tasks;
  bool operator==(const UnaryConstruction&) const = default;
};
struct BinaryConstruction {
  Predicate name;
  Box<SetExpr> tasks1;
  Box<SetExpr> tasks2;
  Quantifier quantifier;  // Any or All
  bool operator==(const BinaryConstruction&) const = default;
};
// Union and intersection fold left; difference folds right:
// A EXCEPT B EXCEPT C means A \ (B \ C).
struct SetOperation {
  enum class Op { Union, Intersect, Except };
  Op op;
  std::vector<SetExpr> operands;  // at least two
  bool operator==(const SetOperation&) const;
};

struct SetExpr {
  std::variant<VarRef, AllTasks, TaskLiteral, UnaryConstruction, BinaryConstruction, SetOperation> node;
  bool operator==(const SetExpr&) const = default;
};

inline bool SetOperation::operator==(const SetOperation& o) const { return op == o.op && operands == o.operands; }

struct PredExpr;

struct UnaryPredicate {
  Predicate name;
  TaskExpr task;
  bool operator==(const UnaryPredicate&) const = default;
};
struct BinaryPredicate {
  Predicate name;
  TaskExpr task1;
  TaskExpr task2;
  bool operator==(const BinaryPredicate&) const = default;
};
struct UnaryMacro {
  Predicate name;
  SetExpr tasks;
  Quantifier quantifier;  // Any or All
  bool operator==(const UnaryMacro&) const = default;
};
struct TaskSetMacro {
  Predicate name;
  TaskExpr task;
  SetExpr tasks;
  Quantifier quantifier;  // Any or All
  bool operator==(const TaskSetMacro&) const = default;
};
struct SetSetMacro {
  Predicate name;
  SetExpr tasks1;
  SetExpr tasks2;
  Quantifier quantifier;
  bool operator==(const SetSetMacro&) const = default;
};
struct TaskIn {
  TaskExpr task;
  SetExpr tasks;
  bool operator==(const TaskIn&) const = default;
};
struct SetComparison {
  enum class Op { Identical, Different, OverlapsWith, SubsetOf, ProperSubsetOf };
  SetExpr lhs;
  Op op;
  SetExpr rhs;
  bool operator==(const SetComparison&) const = default;
};
struct TruthValue {
  bool value;
  bool operator==(const TruthValue&) const = default;
};
struct Negation {
  Box<PredExpr> operand;
  bool operator==(const Negation&) const = default;
};
struct Conjunction {
  std::vector<PredExpr> operands;
  bool operator==(const Conjunction&) const;
};
struct Disjunction {
  std::vector<PredExpr> operands;
  bool operator==(const Disjunction&) const;
};
struct LogicalTest {
  enum class Kind { IsTrue, IsNotTrue, IsFalse, IsNotFalse };
  Box<PredExpr> operand;
  Kind kind;
  bool operator==(const LogicalTest&) const = default;
};

struct PredExpr {
  std::variant<UnaryPredicate, BinaryPredicate, UnaryMacro, TaskSetMacro, SetSetMacro, TaskIn, SetComparison,
               TruthValue, Negation, Conjunction, Disjunction, LogicalTest>
      node;
  bool operator==(const PredExpr&) const = default;
};

inline bool Conjunction::operator==(const Conjunction& o) const { return operands == o.operands; }
inline bool Disjunction::operator==(const Disjunction& o) const { return operands == o.operands; }

struct Variable {
  std::string name;
  SetExpr tasks;
  bool operator==(const Variable&) const = default;
};

// Absent optional = Universe ('*').
using AttributeSpec = std::optional<std::string>;
using LocationSpec = std::optional<std::string>;

struct Query {
  std::vector<Variable> variables;
  std::vector<AttributeSpec> attributes;
  std::vector<LocationSpec> locations;
  std::optional<PredExpr> predicate;
  bool operator==(const Query&) const = default;
};

std::string_view quantifier_name(Quantifier q);

}  // namespace pql::query
