#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace castor {

enum class ErrorCode {
  // usage
  InvalidConfig,
  InvalidShapeletLength,
  InvalidFoldCount,
  // data
  IoError,
  ParseError,
  RaggedDataset,
  InvalidDataset,
  SeriesTooShort,
  SeriesLengthMismatch,
  ShapeletLongerThanSeries,
  SubsequenceOutOfBounds,
  ShapeletTooLong,
  FeatureDimensionMismatch,
  InvalidModelFile,
  // numeric
  InternalPaddingError,
  InsufficientData,
  InvalidFeatures,
};

enum class ErrorKind { Usage, Data, Numeric };

constexpr ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidShapeletLength:
    case ErrorCode::InvalidFoldCount:
      return ErrorKind::Usage;
    case ErrorCode::InternalPaddingError:
    case ErrorCode::InsufficientData:
    case ErrorCode::InvalidFeatures:
      return ErrorKind::Numeric;
    default:
      return ErrorKind::Data;
  }
}

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error{std::string{to_string(code)} + ": " + message},
        code_{code} {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace castor
