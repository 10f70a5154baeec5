#pragma once

#include <stdexcept>
#include <string>

namespace jsnap {

enum class ErrorCode {
  kUnknownTimestamp,
  kUninitializedPointer,
  kGuardViolation,
  kPrecondition,
  kDisabledStep,
  kValueOutOfDomain,
  kBudgetExceeded,
  kInvalidSchedule,
  kSizeLimit,
  kIncompleteTrace,
  kParse,
};

const char* to_string(ErrorCode code) noexcept;

// All failures raised by the library. Guard violations on auxiliary
// transitions indicate a scheduler bug, never a property of the algorithm.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jsnap
