#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace harmonizer {

// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input files. Maps to exit code 3.
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (unknown key, wrong type, bad bounds). Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed. Carries the stage name. Maps to exit code 4.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Network failure that survived the retry budget, or a cache miss in offline mode.
class TransientFetchError : public Error {
 public:
  using Error::Error;
};

// A name whose embedding is the zero vector (no usable tokens).
class DegenerateNameError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation's precondition (arity mismatch, empty input where forbidden).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace harmonizer
