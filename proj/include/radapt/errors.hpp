#pragma once

#include <stdexcept>
#include <string>

namespace radapt {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad dimensions, non-finite values, broken invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Instance too large for an exact computation path.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

// Normal system is singular and no regularization was requested.
class SingularSystemError : public Error {
 public:
  explicit SingularSystemError(const std::string& what) : Error(what) {}
};

// Caller violated a documented contract (e.g. a formula valid only at the
// size-proportional weights was invoked with other weights).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(what) {}
};

// Filesystem / serialization failure, with path context in the message.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace radapt
