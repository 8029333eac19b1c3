#pragma once

#include <stdexcept>
#include <string>

namespace entrolab {

// A point, parameter or value outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Construction parameters out of their documented range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called without its precondition (e.g. period of a reducible matrix).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation not supported for this input (e.g. non-covering transition matrix).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural invariant of a graph, splitting or map is violated.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number (0 when unknown).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace entrolab
