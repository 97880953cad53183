#include "rigidview/error.hpp"

namespace rigidview {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::ParallelLines: return "ParallelLines";
    case ErrorKind::NotCollinear: return "NotCollinear";
    case ErrorKind::DegenerateQuadruple: return "DegenerateQuadruple";
    case ErrorKind::CollinearBasis: return "CollinearBasis";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::DegenerateTraces: return "DegenerateTraces";
    case ErrorKind::LeadingCoefficientVanishes: return "LeadingCoefficientVanishes";
    case ErrorKind::NoRootInInterval: return "NoRootInInterval";
    case ErrorKind::NoValidRoot: return "NoValidRoot";
    case ErrorKind::InvalidSolution: return "InvalidSolution";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NoValidAssignment: return "NoValidAssignment";
    case ErrorKind::PointAtFocus: return "PointAtFocus";
    case ErrorKind::RayParallelToPlane: return "RayParallelToPlane";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::RaysParallel: return "RaysParallel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rigidview
