#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fragsim {

enum class ErrorCode {
  NegativeMass,
  MassBudgetExceeded,
  ScaleOutOfRange,
  RankOutOfRange,
  InvalidFragmentVector,
  EmptyRestriction,
  RefinementMismatch,
  NotAPermutation,
  InvalidPartition,
  DivergentMeasure,
  InvalidMeasure,
  EmptyTruncation,
  DeadState,
  DegenerateNormalizer,
  EmptySample,
  TooFewSamples,
  InsufficientData,
  UnknownSuite,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception; `code()` identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fragsim
