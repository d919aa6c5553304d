#pragma once

#include <stdexcept>
#include <string>

namespace flowlab {

enum class ErrorKind {
  Validation,
  DegenerateCurve,
  TimeOutOfRange,
  SingularMetric,
  InsufficientSnapshots,
  NonpositiveU,
  BlowUp,
  Instability,
  PositivityLoss,
  CurveCollapse,
  GridMismatch,
  NoncompactAmbient,
  InvalidTimeOrdering,
  NonpositiveTau,
  NonpositiveCurvature,
  IoError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorKind::NonpositiveU: return "NonpositiveU";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::PositivityLoss: return "PositivityLoss";
    case ErrorKind::CurveCollapse: return "CurveCollapse";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NoncompactAmbient: return "NoncompactAmbient";
    case ErrorKind::InvalidTimeOrdering: return "InvalidTimeOrdering";
    case ErrorKind::NonpositiveTau: return "NonpositiveTau";
    case ErrorKind::NonpositiveCurvature: return "NonpositiveCurvature";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to CLI exit code 3.
inline bool is_numerical_failure(ErrorKind k) {
  return k == ErrorKind::BlowUp || k == ErrorKind::Instability || k == ErrorKind::PositivityLoss ||
         k == ErrorKind::CurveCollapse;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error carrying the simulation time at which a run failed.
class FlowError : public Error {
 public:
  FlowError(ErrorKind kind, double t, const std::string& what)
      : Error(kind, what + " (t = " + std::to_string(t) + ")"), time_(t) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace flowlab
