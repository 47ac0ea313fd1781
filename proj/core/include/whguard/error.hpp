#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace whguard {

enum class ErrorCode {
  EmptyUrl,
  FileNotFound,
  MissingColumn,
  MalformedRow,
  UnknownLabel,
  EmptyMatrix,
  DegenerateSplit,
  DimensionMismatch,
  SingleClassTrainingSet,
  LatentTooLarge,
  KOutOfRange,
  EmptyNode,
  TooFewRows,
  LengthMismatch,
  EmptyInput,
  IoError,
  UnsupportedVersion,
  CorruptArtifact,
  ThresholdOutOfRange,
  FeatureSpecMismatch,
  InvalidConfig,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure the library reports on bad input. what() reads
// "<CodeName>: <detail>" so callers can grep for the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace whguard
