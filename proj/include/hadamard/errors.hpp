#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hadamard {

// Base of every error raised by the library. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidStructure : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// The search would exceed its word budget. Carries how far it got.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, int radius_completed, std::uint64_t enumerated)
      : Error(what), radius_completed(radius_completed), enumerated(enumerated) {}

  /// Largest radius whose ball was fully searched, or -1.
  int radius_completed;
  std::uint64_t enumerated;
};

}  // namespace hadamard
