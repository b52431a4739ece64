#ifndef DYERGEO_ERRORS_HPP
#define DYERGEO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyergeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected while reading a graph file or a word literal.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An element cap or deadline was exceeded before a computation finished.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// The next two exceptions signal contradictions with guaranteed structure.
// They must never fire on a valid build; tests treat them as hard failures.

/// A non-geodesic path admitted no shorter 2M-fellow-travelling replacement.
class FalsificationError : public Error {
 public:
  using Error::Error;
};

/// Two elements with identical cone profiles disagreed on a transition.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyergeo

#endif
