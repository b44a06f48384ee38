#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inerton {

enum class ErrorCode {
  InvalidParameter,
  ImaginaryResidual,
  PolarizationSingularity,
  Instability,
  Asymmetry,
  StepSize,
  ExactResonance,
  RealityViolation,
  Superluminal,
  EmptyWindow,
  InvalidTolerance,
  MalformedConfig,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::ImaginaryResidual: return "imaginary-residual";
    case ErrorCode::PolarizationSingularity: return "polarization-singularity";
    case ErrorCode::Instability: return "instability";
    case ErrorCode::Asymmetry: return "asymmetry";
    case ErrorCode::StepSize: return "step-size";
    case ErrorCode::ExactResonance: return "exact-resonance";
    case ErrorCode::RealityViolation: return "reality-violation";
    case ErrorCode::Superluminal: return "superluminal-input";
    case ErrorCode::EmptyWindow: return "empty-window";
    case ErrorCode::InvalidTolerance: return "invalid-tolerance";
    case ErrorCode::MalformedConfig: return "malformed-config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can branch on the kind of failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

namespace detail {

inline void require_positive(double value, std::string_view name) {
  if (!(value > 0.0)) {
    throw Error(ErrorCode::InvalidParameter,
                std::string(name) + " must be positive, got " + std::to_string(value));
  }
}

}  // namespace detail
}  // namespace inerton
