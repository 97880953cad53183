#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rigidview/focal_locator.hpp"
#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"

namespace rigidview {

/// Badness of an assignment whose focal solve fails.
inline constexpr double kFailedBadness = std::numeric_limits<double>::max();

struct MatchOptions {
  /// Root isolation, no extra-point ranking: the matcher scores extra
  /// points itself. Raise residual_rel_gate for noisy input.
  FocalOptions focal = [] {
    FocalOptions o;
    o.search = RootSearch::Isolation;
    o.disambiguate_with_extra_points = false;
    return o;
  }();
  /// Ceiling on n!/(n-8)!, the count of ordered 8-point selections.
  std::uint64_t budget = 5'000'000;
  int threads = 1;
  /// Remaining points are assigned by exhaustive permutation up to this
  /// many, greedily with swap refinement beyond.
  std::size_t exact_remaining_limit = 6;
};

struct MatchDiagnostics {
  std::uint64_t combinatorial_count = 0;  // n!/(n-8)!
  std::uint64_t basis_selections = 0;     // n!/(n-7)!, the selections enumerated
  std::uint64_t failed_solves = 0;        // selections without a valid focal candidate
  std::uint64_t pruned = 0;               // remaining-point searches cut short
};

struct MatchResult {
  /// assignment[i] is the index in s2 of the point matched to s1[i].
  std::vector<std::size_t> assignment;
  double badness = kFailedBadness;
  double runner_up_badness = kFailedBadness;
  std::vector<std::size_t> runner_up;
  /// Full assignments scored, summed over basis selections.
  std::uint64_t evaluated = 0;
  MatchDiagnostics diagnostics;
};

/// Sum of line residuals of s2[assignment[i]] for i >= 7, with s1[0..6] and
/// their partners as the basis R,P,Q,A,C,E,G. Minimum over the valid focal
/// candidates; kFailedBadness when there is none.
double badness(const std::vector<std::size_t>& assignment, const std::vector<Point2D>& s1,
               const std::vector<Point2D>& s2, const MatchOptions& options = {});

/// s1[0..6] is taken as the basis; every ordered choice of 7 points of s2
/// is tried as its partner and the rest are paired by predicted-line
/// residual. Throws InvalidArgument (sizes), BudgetExceeded,
/// NoValidAssignment.
MatchResult match_identities(const std::vector<Point2D>& s1, const std::vector<Point2D>& s2,
                             const MatchOptions& options = {});

struct MembershipResult {
  bool member = false;
  double residual = 0.0;
};

/// Whether the pair (z1, z2) can be the two images of a point rigidly
/// attached to the labeled seven. Necessary, not sufficient: a point slid
/// along z'' passes.
MembershipResult rigid_membership(const LabeledFrame& frame1, const LabeledFrame& frame2,
                                  std::pair<Point2D, Point2D> candidate, double tol,
                                  const FocalOptions& options = {});

/// n!/(n-k)!, saturating at the uint64 maximum.
std::uint64_t ordered_selections(std::size_t n, std::size_t k);

}  // namespace rigidview
