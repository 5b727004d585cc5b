#include "chiraltop/error.hpp"

namespace chiraltop {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnsupportedSpace: return "UnsupportedSpace";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GapViolation: return "GapViolation";
    case ErrorKind::ChiralityViolation: return "ChiralityViolation";
    case ErrorKind::ContourTouchesSpectrum: return "ContourTouchesSpectrum";
    case ErrorKind::RankDrift: return "RankDrift";
    case ErrorKind::AsymmetricFamily: return "AsymmetricFamily";
    case ErrorKind::AsymmetricGradation: return "AsymmetricGradation";
    case ErrorKind::Admissibility: return "Admissibility";
    case ErrorKind::BranchMarginal: return "BranchMarginal";
    case ErrorKind::StepMarginal: return "StepMarginal";
    case ErrorKind::NotFramable: return "NotFramable";
    case ErrorKind::Unresolved: return "Unresolved";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::OutsideTabulatedRange: return "OutsideTabulatedRange";
    case ErrorKind::OutsideProvedRange: return "OutsideProvedRange";
    case ErrorKind::IncompleteReport: return "IncompleteReport";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::InvalidBundle: return "InvalidBundle";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace chiraltop
