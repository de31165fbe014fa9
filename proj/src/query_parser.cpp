#include "ajl/query_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ajl/errors.hpp"

namespace ajl {

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view token) {
    skip_space();
    return text_.substr(pos_, token.size()) == token;
  }

  void expect(std::string_view token) {
    if (!peek(token)) fail("expected '" + std::string(token) + "'");
    for (std::size_t i = 0; i < token.size(); ++i) advance();
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      fail("expected an identifier");
    }
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& message) {
    if (pos_ >= text_.size()) throw SyntaxError(message + " but reached end of input", line_, column_);
    throw SyntaxError(message + " near '" + std::string(1, text_[pos_]) + "'", line_, column_);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::vector<std::string> variable_list(Lexer& lex, bool allow_empty) {
  std::vector<std::string> vars;
  lex.expect("(");
  if (lex.peek(")")) {
    if (!allow_empty) lex.fail("atoms need at least one variable");
    lex.expect(")");
    return vars;
  }
  vars.push_back(lex.identifier());
  while (lex.peek(",")) {
    lex.expect(",");
    vars.push_back(lex.identifier());
  }
  lex.expect(")");
  return vars;
}

}  // namespace

Query parse_query(std::string_view text) {
  Lexer lex(text);
  auto name = lex.identifier();
  auto head = variable_list(lex, true);
  lex.expect(":-");
  std::vector<Atom> body;
  while (true) {
    Atom a;
    a.relation = lex.identifier();
    a.vars = variable_list(lex, false);
    body.push_back(std::move(a));
    if (lex.peek(",")) {
      lex.expect(",");
      continue;
    }
    break;
  }
  lex.expect(".");
  if (!lex.at_end()) lex.fail("unexpected input after the query");
  return Query(std::move(head), std::move(body), std::move(name));
}

Query load_query(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open query file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_query(buf.str());
}

std::string format_query(const Query& q) {
  auto list = [](const std::vector<std::string>& vs) {
    std::string s = "(";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + vs[i];
    return s + ")";
  };
  std::string out = q.name() + list(q.head()) + " :- ";
  for (std::size_t i = 0; i < q.size(); ++i) {
    out += (i ? ", " : "") + q.atom(i).relation + list(q.atom(i).vars);
  }
  return out + ".\n";
}

}  // namespace ajl
