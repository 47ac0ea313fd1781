#include "whguard/error.hpp"

namespace whguard {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyUrl: return "EmptyUrl";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::LatentTooLarge: return "LatentTooLarge";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::EmptyNode: return "EmptyNode";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CorruptArtifact: return "CorruptArtifact";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::FeatureSpecMismatch: return "FeatureSpecMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& detail) {
  std::string out{to_string(code)};
  if (!detail.empty()) {
    out += ": ";
    out += detail;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(std::move(detail)) {}

}  // namespace whguard
