#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causnet {

enum class ErrorCode {
  InvalidArgument,
  ConstantChannel,
  SeriesTooShort,
  NonFiniteValue,
  KTooSmall,
  PersistentDivergence,
  NumericBlowup,
  IllConditioned,
  SingularAtFrequency,
  SingularConditioningBlock,
  TooFewSamples,
  EmptyBand,
  DimensionMismatch,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that callers (the bench sweep in particular) can record it per cell.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConstantChannel: return "ConstantChannel";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::PersistentDivergence: return "PersistentDivergence";
    case ErrorCode::NumericBlowup: return "NumericBlowup";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SingularAtFrequency: return "SingularAtFrequency";
    case ErrorCode::SingularConditioningBlock: return "SingularConditioningBlock";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace causnet
