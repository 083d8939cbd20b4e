#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgdq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed N-Triples or query text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        detail_(std::move(message)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

// A predicate classified as a relation also occurs with a literal object.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// Query uses a SPARQL feature outside the conjunctive subset.
class UnsupportedFeatureError : public Error {
 public:
  using Error::Error;
};

// Semantic problem with an otherwise well-formed query.
class QueryError : public Error {
 public:
  using Error::Error;
};

// Inconsistent input to one of the offline build steps.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Store directory missing files, wrong version, or checksum mismatch.
class StoreCorruptError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgdq
