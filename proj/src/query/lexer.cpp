#include <array>
#include <cctype>

#include "pql/query/parser.hpp"

namespace pql::query {

namespace {

constexpr std::array kKeywords = {
    "SELECT", "FROM",  "WHERE", "EQUALS", "OVERLAPS", "WITH",      "SUBSET", "PROPER", "GetTasks",
    "NOT",    "AND",   "OR",    "ANY",    "SOME",     "EACH",      "ALL",    "IN",     "IS",
    "OF",     "TRUE",  "FALSE", "UNION",  "INTERSECT", "EXCEPT",
    "CanOccur", "AlwaysOccurs", "CanConflict", "CanCooccur", "Conflict", "Cooccur", "TotalCausal",
    "TotalConcurrent"};

bool is_keyword(const std::string& w) {
  for (auto k : kKeywords)
    if (w == k) return true;
  return false;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[pos_];
      if (c == '"') {
        t.kind = TokenKind::String;
        t.text = string_literal();
        out.push_back(std::move(t));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = TokenKind::Number;
        t.text = number();
        out.push_back(std::move(t));
      } else if (c == '_' || std::islower(static_cast<unsigned char>(c))) {
        t.kind = TokenKind::Variable;
        while (pos_ < s_.size() && (s_[pos_] == '_' || std::islower(static_cast<unsigned char>(s_[pos_])) ||
                                    std::isdigit(static_cast<unsigned char>(s_[pos_]))))
          t.text += advance();
        out.push_back(std::move(t));
      } else if (std::isupper(static_cast<unsigned char>(c))) {
        std::string w;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) w += advance();
        t.kind = TokenKind::Keyword;
        // GetTasks glued to a predicate name: GetTasksCanOccur.
        if (w.size() > 8 && w.compare(0, 8, "GetTasks") == 0 && is_keyword(w.substr(8))) {
          t.text = "GetTasks";
          out.push_back(t);
          t.column += 8;
          t.text = w.substr(8);
        } else if (is_keyword(w)) {
          t.text = w;
        } else {
          throw ParseError(t.line, t.column, "unknown word '" + w + "'");
        }
        out.push_back(std::move(t));
      } else if (std::string_view("(){}[];,=~*").find(c) != std::string_view::npos) {
        t.kind = TokenKind::Punct;
        t.text = std::string(1, advance());
        out.push_back(std::move(t));
      } else {
        throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  char advance() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;  // count code points, not bytes
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '-') {
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') advance();
      } else {
        return;
      }
    }
  }

  std::string string_literal() {
    auto line = line_, col = col_;
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) throw ParseError(line, col, "unterminated string");
      char c = advance();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) throw ParseError(line, col, "unterminated string");
      auto el = line_, ec = col_ - 1;
      char e = advance();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          unsigned cp = 0;
          for (int i = 0; i < 4; ++i) {
            if (pos_ >= s_.size() || !std::isxdigit(static_cast<unsigned char>(s_[pos_])))
              throw ParseError(el, ec, "bad unicode escape");
            char h = advance();
            cp = cp * 16 + (std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : (std::tolower(h) - 'a' + 10));
          }
          append_utf8(out, cp);
          break;
        }
        default:
          throw ParseError(el, ec, std::string("bad escape '\\") + e + "'");
      }
    }
  }

  std::string number() {
    auto line = line_, col = col_;
    std::string out;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) out += advance();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      out += advance();
      std::size_t digits = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        out += advance();
        ++digits;
      }
      if (digits == 0) throw ParseError(line, col, "malformed number '" + out + "'");
    }
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(const std::string& text) { return Lexer(text).run(); }

}  // namespace pql::query
