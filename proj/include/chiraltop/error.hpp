#pragma once

#include <stdexcept>
#include <string>

namespace chiraltop {

enum class ErrorKind {
  NonHermitian,
  NonUnitary,
  NonFinite,
  NoConvergence,
  NearSingular,
  BranchCut,
  DimensionMismatch,
  UnsupportedSpace,
  DegreeOutOfRange,
  OutOfRange,
  GapViolation,
  ChiralityViolation,
  ContourTouchesSpectrum,
  RankDrift,
  AsymmetricFamily,
  AsymmetricGradation,
  Admissibility,
  BranchMarginal,
  StepMarginal,
  NotFramable,
  Unresolved,
  BoundaryMismatch,
  FrameMismatch,
  OutsideTabulatedRange,
  OutsideProvedRange,
  IncompleteReport,
  BadParams,
  InvalidBundle,
  Format,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Offending numeric quantity (singular value, residual, eigenvalue...) when one exists.
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace chiraltop
