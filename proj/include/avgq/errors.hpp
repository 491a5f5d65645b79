#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace avgq {

// Malformed input text (truth tables, DNF files, CLI parameters).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(decorate(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string decorate(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  int line_;
  int column_;
};

// A size limit was exceeded (variable count, DP limit, measurement limit).
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called outside the hypothesis it implements.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A strategy produced an output that disagrees with f.
class ZeroErrorViolation : public std::logic_error {
 public:
  ZeroErrorViolation(const std::string& what, std::uint64_t witness)
      : std::logic_error(what + " (witness input index " + std::to_string(witness) + ")"),
        witness_(witness) {}

  std::uint64_t witness() const { return witness_; }

 private:
  std::uint64_t witness_;
};

}  // namespace avgq

namespace avgq {

// An experiment name the registry does not know.
class UnknownExperiment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace avgq
