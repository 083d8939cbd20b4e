#include "sgdq/query.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "sgdq/error.hpp"

namespace sgdq {
namespace {

const char* const kXsd = "http://www.w3.org/2001/XMLSchema#";

enum class Tok { Iri, PName, Var, Literal, Number, Word, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // IRI body, prefixed name, variable name, literal form, ...
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (c == '<') {
      std::size_t end = s_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated IRI", t);
      t.kind = Tok::Iri;
      t.text = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
      advance(end + 1 - pos_);
    } else if (c == '?' || c == '$') {
      advance(1);
      t.kind = Tok::Var;
      t.text = name();
      if (t.text.empty()) fail("empty variable name", t);
    } else if (c == '"' || c == '\'') {
      t.kind = Tok::Literal;
      t.text = quoted(c, t);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               ((c == '-' || c == '+') && pos_ + 1 < s_.size() &&
                std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      t.kind = Tok::Number;
      std::size_t start = pos_;
      advance(1);
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                  (s_[pos_] == '.' && pos_ + 1 < s_.size() &&
                                   std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))))) {
        advance(1);
      }
      t.text = std::string(s_.substr(start, pos_ - start));
    } else if (std::string_view("{}.;,*()").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else if (c == '^' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '^') {
      t.kind = Tok::Punct;
      t.text = "^^";
      advance(2);
    } else if (c == '@') {
      advance(1);
      t.kind = Tok::Word;
      t.text = "@" + name();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      std::string word = name();
      if (pos_ < s_.size() && s_[pos_] == ':') {
        advance(1);
        t.kind = Tok::PName;
        t.text = word + ":" + name();
      } else {
        t.kind = Tok::Word;
        t.text = word;
      }
    } else {
      fail(std::string("unexpected character '") + c + "'", t);
    }
    return t;
  }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }
  // Name characters; a trailing '.' is left for the statement separator.
  std::string name() {
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                c == '-' || (c & 0x80);
      if (c == '.' && pos_ + 1 < s_.size()) {
        char d = s_[pos_ + 1];
        ok = std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '-';
      }
      if (!ok) break;
      advance(1);
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string quoted(char quote, const Token& at) {
    advance(1);
    std::string body;
    bool closed = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\\' && pos_ + 1 < s_.size()) {
        body += c;
        body += s_[pos_ + 1];
        advance(2);
        continue;
      }
      if (c == '\n') break;
      advance(1);
      if (c == quote) {
        closed = true;
        break;
      }
      if (c == '"') body += '\\';
      body += c;
    }
    if (!closed) fail("unterminated literal", at);
    return "\"" + body + "\"";
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool keyword(const Token& t, std::string_view kw) {
  if (t.kind != Tok::Word || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  }
  return true;
}

const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kWords = {
      "FILTER", "OPTIONAL", "UNION", "GRAPH", "MINUS", "BIND", "VALUES",
      "SERVICE", "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING", "ASK",
      "CONSTRUCT", "DESCRIBE", "FROM", "BASE"};
  return kWords;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { shift(); }

  Query parse() {
    Query q;
    while (keyword(cur_, "PREFIX")) {
      shift();
      if (cur_.kind != Tok::PName || cur_.text.back() != ':') {
        Lexer::fail("expected prefix name", cur_);
      }
      std::string prefix = cur_.text.substr(0, cur_.text.size() - 1);
      shift();
      if (cur_.kind != Tok::Iri) Lexer::fail("expected IRI after prefix", cur_);
      q.prefixes[prefix] = cur_.text;
      shift();
    }
    check_unsupported();
    if (!keyword(cur_, "SELECT")) Lexer::fail("expected SELECT", cur_);
    shift();
    if (keyword(cur_, "DISTINCT") || keyword(cur_, "REDUCED")) shift();
    if (cur_.kind == Tok::Punct && cur_.text == "*") {
      q.select_all = true;
      shift();
    } else {
      while (cur_.kind == Tok::Var) {
        if (std::find(q.select.begin(), q.select.end(), cur_.text) == q.select.end()) {
          q.select.push_back(cur_.text);
        }
        shift();
      }
      if (q.select.empty()) {
        check_unsupported();
        Lexer::fail("expected variables or '*' after SELECT", cur_);
      }
    }
    check_unsupported();
    if (keyword(cur_, "WHERE")) shift();
    expect("{");
    prefixes_ = &q.prefixes;
    while (!(cur_.kind == Tok::Punct && cur_.text == "}")) {
      if (cur_.kind == Tok::End) Lexer::fail("expected '}'", cur_);
      check_unsupported();
      triples_block(q);
      if (cur_.kind == Tok::Punct && cur_.text == ".") {
        shift();
      } else if (!(cur_.kind == Tok::Punct && cur_.text == "}")) {
        check_unsupported();
        Lexer::fail("expected '.' or '}'", cur_);
      }
    }
    shift();
    check_unsupported();
    if (cur_.kind != Tok::End) Lexer::fail("unexpected text after '}'", cur_);
    return q;
  }

 private:
  void shift() { cur_ = lex_.next(); }
  void expect(const char* punct) {
    if (cur_.kind != Tok::Punct || cur_.text != punct) {
      Lexer::fail(std::string("expected '") + punct + "'", cur_);
    }
    shift();
  }
  void check_unsupported() {
    if (cur_.kind != Tok::Word) return;
    std::string upper = cur_.text;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (unsupported_keywords().count(upper)) {
      throw UnsupportedFeatureError(std::to_string(cur_.line) + ":" +
                                    std::to_string(cur_.column) + ": " + upper +
                                    " is not supported");
    }
  }

  std::string expand(const Token& t) {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    auto it = prefixes_->find(prefix);
    if (it == prefixes_->end()) Lexer::fail("unknown prefix '" + prefix + ":'", t);
    return it->second + t.text.substr(colon + 1);
  }

  QueryTerm term(bool object_position) {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Var:
        shift();
        return Variable{t.text};
      case Tok::Iri:
        shift();
        if (t.text.empty()) Lexer::fail("empty IRI", t);
        return Term::iri(t.text);
      case Tok::PName:
        shift();
        if (t.text.rfind("_:", 0) == 0) return Term::iri("bnode:" + t.text.substr(2));
        return Term::iri(expand(t));
      case Tok::Literal: {
        if (!object_position) Lexer::fail("literal in subject position", t);
        shift();
        std::string lexical = t.text;
        if (cur_.kind == Tok::Word && cur_.text.front() == '@') {
          if (cur_.text.size() == 1) Lexer::fail("empty language tag", cur_);
          lexical += cur_.text;
          shift();
        } else if (cur_.kind == Tok::Punct && cur_.text == "^^") {
          shift();
          if (cur_.kind == Tok::Iri) {
            lexical += "^^<" + cur_.text + ">";
          } else if (cur_.kind == Tok::PName) {
            lexical += "^^<" + expand(cur_) + ">";
          } else {
            Lexer::fail("expected datatype IRI", cur_);
          }
          shift();
        }
        return Term::literal(lexical);
      }
      case Tok::Number: {
        if (!object_position) Lexer::fail("literal in subject position", t);
        shift();
        bool decimal = t.text.find('.') != std::string::npos;
        return Term::literal("\"" + t.text + "\"^^<" + kXsd +
                             (decimal ? "decimal" : "integer") + ">");
      }
      default:
        check_unsupported();
        Lexer::fail("expected a term", t);
    }
  }

  Term predicate() {
    Token t = cur_;
    if (t.kind == Tok::Var) {
      throw UnsupportedFeatureError(std::to_string(t.line) + ":" +
                                    std::to_string(t.column) +
                                    ": predicate variables are not supported (?" +
                                    t.text + ")");
    }
    if (t.kind == Tok::Word && t.text == "a") {
      shift();
      return rdf_type();
    }
    if (t.kind == Tok::Iri) {
      shift();
      return Term::iri(t.text);
    }
    if (t.kind == Tok::PName) {
      shift();
      return Term::iri(expand(t));
    }
    Lexer::fail("expected a predicate", t);
  }

  void triples_block(Query& q) {
    QueryTerm s = term(false);
    while (true) {
      Term p = predicate();
      while (true) {
        QueryTerm o = term(true);
        q.patterns.push_back({s, p, o});
        if (cur_.kind == Tok::Punct && cur_.text == ",") {
          shift();
          continue;
        }
        break;
      }
      if (cur_.kind == Tok::Punct && cur_.text == ";") {
        shift();
        if (cur_.kind == Tok::Punct && (cur_.text == "." || cur_.text == "}")) return;
        continue;
      }
      return;
    }
  }

  Lexer lex_;
  Token cur_;
  const std::map<std::string, std::string>* prefixes_ = nullptr;
};

// Patterns are connected when they share a variable or an IRI in
// subject/object position.
bool connected(const Query& q) {
  const std::size_t n = q.patterns.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> first;
  for (std::size_t i = 0; i < n; ++i) {
    for (const QueryTerm* t : {&q.patterns[i].s, &q.patterns[i].o}) {
      if (!is_variable(*t) && std::get<Term>(*t).is_literal()) continue;
      std::string key = to_string(*t);
      auto [it, inserted] = first.emplace(key, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (find(i) != find(0)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(const QueryTerm& t) {
  if (is_variable(t)) return "?" + variable_name(t);
  return std::get<Term>(t).to_ntriples();
}

std::vector<std::string> Query::variables() const {
  std::vector<std::string> out;
  for (const TriplePattern& p : patterns) {
    for (const QueryTerm* t : {&p.s, &p.o}) {
      if (is_variable(*t) &&
          std::find(out.begin(), out.end(), variable_name(*t)) == out.end()) {
        out.push_back(variable_name(*t));
      }
    }
  }
  return out;
}

std::vector<std::string> Query::projection() const {
  return select_all ? variables() : select;
}

Query parse_query(std::string_view text) {
  Query q = Parser(text).parse();
  if (q.patterns.empty()) throw QueryError("query has no triple patterns");
  if (!connected(q)) throw QueryError("query patterns are not connected");
  return q;
}

}  // namespace sgdq
