#pragma once

#include <stdexcept>
#include <string>

namespace epicast {

// Every failure the library can raise, so callers (and the CLI's error JSON)
// can switch on a stable code instead of parsing messages.
enum class ErrorCode {
  // data
  MissingDate,
  NegativeValue,
  MalformedRow,
  EmptyFile,
  ZeroDensity,
  ConstantFeature,
  OutOfRange,
  SeriesTooShort,
  // gru-core
  ShapeMismatch,
  EmptyDataset,
  DivergedLoss,
  InvalidConfig,
  // forecast
  ContextLengthMismatch,
  NonFinitePrediction,
  // ensemble
  ZeroRmse,
  EmptyMemberList,
  DateMisalignment,
  MemberMismatch,
  // metrics
  ZeroOriginal,
  LengthMismatch,
  // experiment
  PartialFailure,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return to_string(code_); }

private:
  ErrorCode code_;
};

}  // namespace epicast
