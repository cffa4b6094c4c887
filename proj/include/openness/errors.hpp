#pragma once

#include <stdexcept>
#include <string>

namespace openness {

/// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameter value violating a documented invariant (e.g. theta > 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed command line or configuration text.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace openness
