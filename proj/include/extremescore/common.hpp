#pragma once

#include <stdexcept>
#include <string>

namespace extremescore {

inline constexpr const char* kVersion = "0.1.0";

enum class ErrorCode {
  AsymmetricSupport,
  ProbSumMismatch,
  SingletonSupport,
  ValueOutOfRange,
  PlayerCountTooSmall,
  KOutOfRange,
  NonPositiveX,
  NoRootInBracket,
  SupportTooLarge,
  Overflow,
  StateSpaceTooLarge,
  InexactProbabilities,
  EmptyExperiment,
  InvalidCounts,
  ConfigError,
  NumericFailure,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace extremescore
