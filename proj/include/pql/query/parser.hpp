#pragma once

#include <set>
#include <string>
#include <vector>

#include "pql/error.hpp"
#include "pql/query/ast.hpp"

namespace pql::query {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message, std::set<std::string> expected = {});
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_, column_;
  std::set<std::string> expected_;
};

enum class TokenKind {
  End,
  String,
  Variable,
  Number,
  Keyword,        // SELECT, FROM, ..., also GetTasks and predicate names
  Punct,          // ( ) { } [ ] ; , = ~ *
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;   // keyword/punct spelling, decoded string value, variable name, number text
  std::size_t line = 1, column = 1;
};

// Whole input, ending with an End token. Throws ParseError on bad characters,
// unterminated strings and unknown words.
std::vector<Token> tokenize(const std::string& text);

Query parse(const std::string& text);

// Canonical PQL text; parse(pretty_print(q)) == q.
std::string pretty_print(const Query& q);
std::string pretty_print(const PredExpr& p);
std::string pretty_print(const SetExpr& s);
std::string pretty_print(const TaskExpr& t);

// Indented tree, one node per line.
std::string dump_parse_tree(const Query& q);

}  // namespace pql::query
