#pragma once

#include <stdexcept>
#include <string>

namespace kl_affine {

/// Error kinds raised by the library. The CLI maps every kind to exit code 2
/// and reports `name(kind)` in its JSON error record.
enum class ErrorKind {
  ImaginaryCoroot,
  CriticalLevel,
  BoundExceeded,
  BudgetExceeded,
  NotFinite,
  NotApplicable,
  NotDominant,
  NotDominantIntegral,
  NotComparable,
  MixedSystems,
  ChambersDiffer,
  IntegralityMismatch,
  PreconditionViolated,
  DepthExceeded,
  IrrationalWeight,
  ParseError,
  UnknownType,
};

inline const char* name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ImaginaryCoroot: return "ImaginaryCoroot";
    case ErrorKind::CriticalLevel: return "CriticalLevel";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::NotDominant: return "NotDominant";
    case ErrorKind::NotDominantIntegral: return "NotDominantIntegral";
    case ErrorKind::NotComparable: return "NotComparable";
    case ErrorKind::MixedSystems: return "MixedSystems";
    case ErrorKind::ChambersDiffer: return "ChambersDiffer";
    case ErrorKind::IntegralityMismatch: return "IntegralityMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::IrrationalWeight: return "IrrationalWeight";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownType: return "UnknownType";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kl_affine
