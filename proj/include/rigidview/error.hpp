#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rigidview {

enum class ErrorKind {
  CoincidentPoints,
  ParallelLines,
  NotCollinear,
  DegenerateQuadruple,
  CollinearBasis,
  DegenerateConfiguration,
  MissingLabel,
  DegenerateTraces,
  LeadingCoefficientVanishes,
  NoRootInInterval,
  NoValidRoot,
  InvalidSolution,
  BudgetExceeded,
  NoValidAssignment,
  PointAtFocus,
  RayParallelToPlane,
  GenerationFailed,
  RaysParallel,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure the library reports carries one of the kinds above so callers
// (the CLI in particular) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace rigidview
