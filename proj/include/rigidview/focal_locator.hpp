#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rigidview/dq_transfer.hpp"
#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"
#include "rigidview/polynomial.hpp"

namespace rigidview {

// Frame 2 is worked in the canonical frame R''=(0,0), Q''=(1,0), P''=(0,1).
// An auxiliary point X'' on plane PQR is parameterized by its two axis traces:
// X''P'' meets the X axis at (1/u, 0) and X''Q'' meets the Y axis at (0, 1/v).

/// Auxiliary point from its trace parameters; throws DegenerateTraces when
/// u*v is 1 (the two trace lines are parallel).
Point2D trace_to_point(double u, double v);

/// Trace parameters of an auxiliary point; inverse of trace_to_point.
struct TraceParams {
  double u = 0.0;
  double v = 0.0;
};
TraceParams point_to_traces(Point2D canonical_point);

/// Trace parameters of D'', F'', H'' from those of B'' via the frame-1
/// quotients: u_X = (1 - qXP) + qXP*u, v_X = (1 - qXQ) + qXQ*v.
struct ChainedTraces {
  TraceParams d;
  TraceParams f;
  TraceParams h;
};
ChainedTraces chained_traces(double u, double v, const FrameQuotients& q);

/// A line through a known canonical-frame point and an auxiliary point whose
/// trace parameters are affine in (u, v): u_X = p0 + p1*u, v_X = q0 + q1*v.
struct TracedLine {
  Point2D known;
  double p0 = 0.0;
  double p1 = 1.0;
  double q0 = 0.0;
  double q1 = 1.0;

  static TracedLine through_b(Point2D a) { return {a, 0.0, 1.0, 0.0, 1.0}; }
  static TracedLine chained(Point2D x, double quotient_p, double quotient_q) {
    return {x, 1.0 - quotient_p, quotient_p, 1.0 - quotient_q, quotient_q};
  }
};

/// Determinant of the three homogeneous lines as a polynomial in (u, v);
/// vanishes exactly when they are concurrent. Cubic in each variable and
/// divisible by (u - 1)(v - 1).
BivariatePoly concurrency_poly(const TracedLine& first, const TracedLine& second, const TracedLine& third);

/// b3*E1 - a3*E2 where a3, b3 are the v^3 coefficients: quadratic in v with
/// coefficients c0(u), c1(u), c2(u). v = 1 is always a root, so the other
/// root is c0/c2.
struct EliminatedQuadratic {
  UnivariatePolynomial c0;
  UnivariatePolynomial c1;
  UnivariatePolynomial c2;
  // c0 and c2 divided by (u - 1)^2.
  UnivariatePolynomial c0_reduced;
  UnivariatePolynomial c2_reduced;

  double evaluate(double u, double v) const { return c0(u) + v * (c1(u) + v * c2(u)); }
  /// Non-degenerate root; throws LeadingCoefficientVanishes if c2(u) ≈ 0.
  double vstar(double u) const;
};

EliminatedQuadratic eliminate_v(const BivariatePoly& eq1, const BivariatePoly& eq2);

/// eq(u, v*(u)) with denominators cleared and the (u - 1)^9 it always
/// carries divided out. Normalized to unit max-norm. The division costs
/// accuracy within a few hundredths of u = 1; the locator itself works with
/// the reduced form below.
UnivariatePolynomial final_polynomial(const BivariatePoly& eq, const EliminatedQuadratic& quad);

/// The same condition in s = u - 1, t = v - 1 with the s*t factor divided
/// out; bidegree (2, 2). The division only drops coefficients that vanish
/// identically, so no rounding is amplified near u = 1. Requires p0 + p1 = 1
/// and q0 + q1 = 1, which through_b and chained lines satisfy.
BivariatePoly reduced_concurrency_poly(const TracedLine& first, const TracedLine& second, const TracedLine& third);

/// Eliminating t^2 from two reduced equations e1 = a0 + a1 t + a2 t^2 and
/// e2 = b0 + b1 t + b2 t^2 leaves s*c0(s) + c1(s) t = 0; a0 and b0 both
/// carry a factor s, already divided out of c0.
struct ReducedElimination {
  UnivariatePolynomial c0;
  UnivariatePolynomial c1;
  /// e1(s, t*(s)) * c1^2 / s, in powers of s.
  UnivariatePolynomial final_poly;

  /// t*(s) = -s c0(s) / c1(s); throws LeadingCoefficientVanishes if c1 ≈ 0.
  double tstar(double s) const;
  /// Final polynomial at u = 1 + s.
  double final_at_u(double u) const { return final_poly(u - 1.0); }
};

ReducedElimination eliminate_reduced(const BivariatePoly& e1, const BivariatePoly& e2);

struct ScanOptions {
  double lo = -50.0;
  double hi = 50.0;
  double step = 1e-3;
  /// Also scan w = 1/u over |w| <= 1/max(|lo|,|hi|) to catch roots outside.
  bool include_tail = true;
  /// |p| at a sign-free local minimum below this fraction of magnitude_at()
  /// is reported as a tangent root.
  double tangency_rel_tol = 1e-9;
};

struct ScannedRoot {
  double u = 0.0;
  bool tangent = false;
};

/// Sign-change scan plus bisection to |du| <= 1e-12. Ascending order.
/// Throws NoRootInInterval when nothing is found.
std::vector<ScannedRoot> solve_u(const UnivariatePolynomial& p, const ScanOptions& scan);

enum class RootSearch { Scan, Isolation };

struct FocalOptions {
  RootSearch search = RootSearch::Scan;
  ScanOptions scan;
  /// Concurrency residual gate, relative to the frame-2 basis extent.
  double residual_rel_gate = 1e-6;
  /// Candidates with |u - 1| or |v - 1| below this collapse onto Q'' or P''.
  double degenerate_rel_tol = 1e-6;
  int newton_polish_steps = 8;
  /// Rank valid candidates by the residual of labels beyond the basis seven.
  bool disambiguate_with_extra_points = true;
  /// When the scan yields no valid candidate, add the roots found by
  /// isolation (roots closer than the scan step hide from the grid).
  bool isolate_on_scan_failure = true;
};

struct RootCandidate {
  double u = 0.0;
  double v = 0.0;
  bool tangent = false;
  bool valid = false;
  std::string rejection;  // empty when valid
  double concurrency_residual = 0.0;
  double extra_point_residual = 0.0;  // sum over extra labels, 0 if none
  Point2D f1pp;
  Point2D b, d, f, h;
};

struct FocalSolution {
  Point2D f1pp;  // original frame-2 coordinates
  Point2D b, d, f, h;
  double u_root = 0.0;
  double v_root = 0.0;
  double concurrency_residual = 0.0;
  std::vector<RootCandidate> all_roots;
};

/// Everything the pipeline produced, without throwing when no candidate
/// passes validation.
struct FocalAnalysis {
  FrameQuotients quotients;
  AffineMap2D to_canonical = AffineMap2D::identity();
  BivariatePoly reduced_ace;  // lines A, C, E in (s, t)
  BivariatePoly reduced_acg;  // lines A, C, G
  ReducedElimination elimination;
  std::vector<RootCandidate> candidates;  // in root order
  std::optional<size_t> selected;
  double frame_scale = 1.0;
  bool used_isolation_fallback = false;
};

FocalAnalysis analyze_focal(const LabeledFrame& frame1, const LabeledFrame& frame2,
                            const FocalOptions& options = {});
/// Core of analyze_focal for precomputed frame-1 quotients and frame-2 basis
/// points in the order R, P, Q, A, C, E, G. No extra-point ranking.
FocalAnalysis analyze_focal_basis(const FrameQuotients& quotients, const std::array<Point2D, 7>& basis,
                                  const FocalOptions& options = {});
/// Throws NoValidRoot when no candidate passes the concurrency gate.
FocalSolution locate_projected_focal(const LabeledFrame& frame1, const LabeledFrame& frame2,
                                     const FocalOptions& options = {});
FocalSolution to_solution(const FocalAnalysis& analysis);

/// Point minimizing the sum of squared distances to the lines.
Point2D least_squares_intersection(const std::vector<Line2D>& lines);

}  // namespace rigidview
