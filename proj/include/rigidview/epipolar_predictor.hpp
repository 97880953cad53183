#pragma once

#include <optional>

#include "rigidview/dq_transfer.hpp"
#include "rigidview/focal_locator.hpp"
#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"

namespace rigidview {

/// The line z'' in frame 2 on which the image of a further rigid point must
/// lie: it joins F1'' (anchor) with the frame-2 image of the point where the
/// ray F1-Z pierces plane PQR (via).
struct PredictedLine {
  Line2D line;
  Point2D via;
  Point2D anchor;
  /// 'A' when the planar basis {P,Q,R,B} was used, 'C' for the fallback
  /// {P,Q,R,D}.
  char basis = 'A';
};

/// DQ coordinates of a frame-1 point relative to {P',Q',R',A'} and
/// {P',Q',R',C'}; either may be absent when its construction degenerates.
/// A' and C' stand in for B and D, which lie on the rays F1A and F1C.
struct Frame1Coordinates {
  std::optional<DqCoordinates> via_a;
  std::optional<DqCoordinates> via_c;
};

Frame1Coordinates frame1_coordinates(Point2D z1, const LabeledFrame& frame1);

struct Frame2Plane {
  Point2D p;
  Point2D q;
  Point2D r;
};

/// Empty when neither basis yields a usable line.
std::optional<PredictedLine> try_predict_from_coordinates(const Frame1Coordinates& coords, const Frame2Plane& plane,
                                                          Point2D f1pp, Point2D b, Point2D d);
/// Throws DegenerateConfiguration when neither basis yields a usable line.
PredictedLine predict_from_coordinates(const Frame1Coordinates& coords, const Frame2Plane& plane,
                                       Point2D f1pp, Point2D b, Point2D d);

/// Throws InvalidSolution for a non-finite solution, DegenerateConfiguration
/// when the construction degenerates.
PredictedLine predict_line(Point2D z1, const LabeledFrame& frame1, const LabeledFrame& frame2,
                           const FocalSolution& solution);

double line_residual(Point2D z2, const PredictedLine& predicted);

}  // namespace rigidview
