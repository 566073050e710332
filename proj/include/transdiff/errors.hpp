#ifndef TRANSDIFF_ERRORS_HPP
#define TRANSDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace transdiff {

// base class for everything this library throws on purpose
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// malformed input data: bad UTF-8, missing TSV columns, bad manifest, ...
class FormatError : public Error {
 public:
  using Error::Error;
};

// rule DSL problems; line/column are 1-based, column 0 means "whole line"
class RulesetError : public Error {
 public:
  RulesetError(const std::string& msg, int line, int column = 0)
      : Error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// alignment would exceed the configured cell budget
class ResourceError : public Error {
 public:
  using Error::Error;
};

// WER requested against an empty reference
class EmptyReferenceError : public Error {
 public:
  using Error::Error;
};

// a synthesis plan asks for more edits than the base text can host
class CapacityError : public Error {
 public:
  CapacityError(const std::string& msg, std::string subtype)
      : Error(msg), subtype_(std::move(subtype)) {}
  const std::string& subtype() const { return subtype_; }

 private:
  std::string subtype_;
};

// inputs disagree with each other (mixed version pairs, duplicate cells)
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// command line misuse that CLI11 cannot catch on its own
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace transdiff

#endif  // TRANSDIFF_ERRORS_HPP
