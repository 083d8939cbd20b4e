#include "sgdq/ntriples.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sgdq/error.hpp"

namespace sgdq {
namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : s_(line), line_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, pos_ + 1);
  }

  Term iri() {
    if (peek() != '<') fail("expected '<'");
    std::size_t end = s_.find('>', pos_ + 1);
    if (end == std::string_view::npos) fail("unterminated IRI");
    std::string value(s_.substr(pos_ + 1, end - pos_ - 1));
    if (value.empty()) fail("empty IRI");
    for (char c : value) {
      if (c == ' ' || c == '<' || c == '"') fail("invalid character in IRI");
    }
    pos_ = end + 1;
    return Term::iri(std::move(value));
  }

  Term blank() {
    std::size_t start = pos_;
    pos_ += 2;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' &&
           s_[pos_] != '.') {
      ++pos_;
    }
    // A trailing '.' directly after the label ends the statement.
    if (pos_ == start + 2) fail("empty blank node label");
    return Term::iri("bnode:" + std::string(s_.substr(start + 2, pos_ - start - 2)));
  }

  Term literal() {
    std::size_t start = pos_;
    ++pos_;
    bool closed = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\\') {
        if (pos_ + 1 >= s_.size()) break;
        pos_ += 2;
        continue;
      }
      ++pos_;
      if (c == '"') {
        closed = true;
        break;
      }
    }
    if (!closed) {
      pos_ = start;
      fail("unterminated literal");
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t tag = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == tag) fail("empty language tag");
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      iri();
    }
    return Term::literal(std::string(s_.substr(start, pos_ - start)));
  }

  Term subject_or_object(bool allow_literal) {
    skip_ws();
    char c = peek();
    if (c == '<') return iri();
    if (c == '_' && s_.substr(pos_, 2) == "_:") return blank();
    if (c == '"' && allow_literal) return literal();
    fail(allow_literal ? "expected IRI, blank node, or literal"
                       : "expected IRI or blank node");
  }

  Triple statement() {
    Triple t;
    t.s = subject_or_object(false);
    skip_ws();
    t.p = iri();
    t.o = subject_or_object(true);
    skip_ws();
    if (peek() != '.') fail("expected '.'");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    return t;
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

std::vector<Triple> parse_ntriples(std::istream& in) {
  std::vector<Triple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    out.push_back(LineParser(line, line_no).statement());
  }
  return out;
}

std::vector<Triple> parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

Term parse_ntriples_term(std::string_view text) {
  LineParser p(text, 1);
  Term t = p.subject_or_object(true);
  p.skip_ws();
  if (!p.at_end()) p.fail("unexpected text after term");
  return t;
}

void write_ntriples(std::ostream& out, std::span<const Triple> triples) {
  for (const Triple& t : triples) {
    out << t.s.to_ntriples() << ' ' << t.p.to_ntriples() << ' '
        << t.o.to_ntriples() << " .\n";
  }
}

}  // namespace sgdq
