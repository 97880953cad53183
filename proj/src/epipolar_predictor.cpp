#include "rigidview/epipolar_predictor.hpp"

#include <cmath>

#include "rigidview/error.hpp"

namespace rigidview {

namespace {

std::optional<DqCoordinates> try_coordinates(Point2D z, const PlanarBasis& basis) {
  try {
    return dq_coordinates(z, basis);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<PredictedLine> try_predict(const DqCoordinates& coords, const PlanarBasis& target, Point2D f1pp,
                                         char tag) {
  try {
    const Point2D via = transfer_point(coords, target);
    const double scale = coordinate_scale({via, f1pp, target.a, target.b, target.c});
    if (distance(via, f1pp) <= tolerance::kCollinear * scale) return std::nullopt;
    return PredictedLine{line_through(f1pp, via), via, f1pp, tag};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Frame1Coordinates frame1_coordinates(Point2D z1, const LabeledFrame& frame1) {
  const Point2D p = frame1.at("P");
  const Point2D q = frame1.at("Q");
  const Point2D r = frame1.at("R");
  Frame1Coordinates out;
  out.via_a = try_coordinates(z1, PlanarBasis{p, q, r, frame1.at("A")});
  out.via_c = try_coordinates(z1, PlanarBasis{p, q, r, frame1.at("C")});
  return out;
}

std::optional<PredictedLine> try_predict_from_coordinates(const Frame1Coordinates& coords, const Frame2Plane& plane,
                                                          Point2D f1pp, Point2D b, Point2D d) {
  if (coords.via_a) {
    if (auto line = try_predict(*coords.via_a, PlanarBasis{plane.p, plane.q, plane.r, b}, f1pp, 'A')) return line;
  }
  if (coords.via_c) {
    if (auto line = try_predict(*coords.via_c, PlanarBasis{plane.p, plane.q, plane.r, d}, f1pp, 'C')) return line;
  }
  return std::nullopt;
}

PredictedLine predict_from_coordinates(const Frame1Coordinates& coords, const Frame2Plane& plane, Point2D f1pp,
                                       Point2D b, Point2D d) {
  if (auto line = try_predict_from_coordinates(coords, plane, f1pp, b, d)) return *line;
  throw Error(ErrorKind::DegenerateConfiguration, "no basis yields a well-defined line z''");
}

PredictedLine predict_line(Point2D z1, const LabeledFrame& frame1, const LabeledFrame& frame2,
                           const FocalSolution& solution) {
  for (const Point2D p : {solution.f1pp, solution.b, solution.d}) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::InvalidSolution, "focal solution has non-finite points");
    }
  }
  const Frame2Plane plane{frame2.at("P"), frame2.at("Q"), frame2.at("R")};
  return predict_from_coordinates(frame1_coordinates(z1, frame1), plane, solution.f1pp, solution.b, solution.d);
}

double line_residual(Point2D z2, const PredictedLine& predicted) {
  return point_line_distance(z2, predicted.line);
}

}  // namespace rigidview
