#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smm {

enum class ErrorKind {
  Parse,
  Validation,
  DimensionMismatch,
  DegenerateDirection,
  RankDeficient,
  NumericalFailure,
  SingularStart,
  InvalidSeed,
  NoConvergence,
  AllFailed,
  DegenerateToggle,
  EmptyTrace,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Index of the Runge-Kutta stage that failed, when raised from a step.
  std::optional<int> stage() const noexcept { return stage_; }

  Error with_stage(int stage) const {
    Error e(kind_, std::string(what()) + " (stage " + std::to_string(stage) + ")");
    e.stage_ = stage;
    return e;
  }

 private:
  ErrorKind kind_;
  std::optional<int> stage_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::SingularStart: return "SingularStart";
    case ErrorKind::InvalidSeed: return "InvalidSeed";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::AllFailed: return "AllFailed";
    case ErrorKind::DegenerateToggle: return "DegenerateToggle";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace smm
