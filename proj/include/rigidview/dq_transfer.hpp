#pragma once

#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"

namespace rigidview {

/// Four image points A, B, C, D of coplanar scene points, no three collinear.
struct PlanarBasis {
  Point2D a;
  Point2D b;
  Point2D c;
  Point2D d;

  /// Throws DegenerateConfiguration if any three are collinear.
  void validate() const;
};

/// Double-quotient coordinates of a point Z relative to a PlanarBasis:
///   q_c = DQ(A, C, D_B, Z_B), where X_B = XB ∩ AC,
///   q_b = DQ(A, B, D_C, Z_C), where X_C = XC ∩ AB.
/// Both are projective invariants of the plane.
struct DqCoordinates {
  double q_c = 1.0;
  double q_b = 1.0;
};

DqCoordinates dq_coordinates(Point2D z, const PlanarBasis& basis);
Point2D transfer_point(const DqCoordinates& coords, const PlanarBasis& target);

/// The six frame-1 quotients. Each *P value is the double quotient along the
/// R'Q' axis of the traces X'P' ∩ R'Q' (X = A against C/E/G); each *Q value
/// the same along R'P' with traces X'Q' ∩ R'P'.
struct FrameQuotients {
  double cp = 1.0;
  double cq = 1.0;
  double ep = 1.0;
  double eq = 1.0;
  double gp = 1.0;
  double gq = 1.0;
};

FrameQuotients frame1_quotients(const LabeledFrame& frame1);

}  // namespace rigidview
