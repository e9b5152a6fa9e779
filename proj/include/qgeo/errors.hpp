#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgeo {

enum class ErrorKind {
  NotHermitian,
  NotAntiHermitian,
  NoConvergence,
  BadDims,
  NotNormalized,
  NotDescending,
  NonPositive,
  SpectrumMismatch,
  NotGauge,
  NotFrame,
  BasepointMismatch,
  NotTangent,
  SpectrumDrift,
  IdentityViolation,
  BadSpin,
  BadEnsemble,
  BadEpsilon,
  ParseError,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotAntiHermitian: return "NotAntiHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotDescending: return "NotDescending";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::NotGauge: return "NotGauge";
    case ErrorKind::NotFrame: return "NotFrame";
    case ErrorKind::BasepointMismatch: return "BasepointMismatch";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::SpectrumDrift: return "SpectrumDrift";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::BadSpin: return "BadSpin";
    case ErrorKind::BadEnsemble: return "BadEnsemble";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library. what() reads "<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qgeo
