#pragma once

#include <stdexcept>
#include <string>

namespace mctsvs {

// Caller passed an argument outside the operation's contract.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point fell outside an objective's box.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite or otherwise unusable observations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Variable score requested while some index has never been queried.
class CoverageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation invoked in a state that cannot serve it (e.g. empty best-k buffer).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mctsvs
