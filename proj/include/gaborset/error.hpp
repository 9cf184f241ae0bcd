#pragma once

#include <stdexcept>
#include <string>

namespace gaborset {

enum class ErrorCode {
  InvalidImage,
  InvalidKernelSize,
  InvalidBank,
  SizeMismatch,
  ShapeError,
  InvalidTrainingSet,
  NoCandidateFeatures,
  SkippedImage,
  DegenerateCounts,
  MissingLabel,
  ConfigError,
  IoError,
  NumericalError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// the CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::InvalidKernelSize: return "InvalidKernelSize";
    case ErrorCode::InvalidBank: return "InvalidBank";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::InvalidTrainingSet: return "InvalidTrainingSet";
    case ErrorCode::NoCandidateFeatures: return "NoCandidateFeatures";
    case ErrorCode::SkippedImage: return "SkippedImage";
    case ErrorCode::DegenerateCounts: return "DegenerateCounts";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NumericalError: return "NumericalError";
  }
  return "Unknown";
}

}  // namespace gaborset
