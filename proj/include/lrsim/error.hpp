#pragma once

#include <stdexcept>
#include <string>

namespace lrsim {

enum class ErrorCode {
  ModeMismatch,        // mixing grid and geographic positions
  OutOfRange,          // argument outside its documented domain
  CheckpointBehind,    // ETA requested for an already-passed checkpoint
  Causality,           // event scheduled before the current clock
  UndefinedInterval,   // checkpoint interval with i >= j
  MissingCheckpoint,   // checkpoint id absent from the record list
  EmptyInput,          // operation needs at least one element
  Invalid,             // broken invariant on an input value
  Config,              // scenario file parse or validation failure
  Io,                  // sink or source not usable
};

/// Library-wide exception. code() tells callers which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lrsim
