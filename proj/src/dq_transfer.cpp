#include "rigidview/dq_transfer.hpp"

#include <cmath>
#include <string>

#include "rigidview/error.hpp"

namespace rigidview {

namespace {

// Geometry failures inside the construction all mean the configuration is
// degenerate for this basis.
template <typename F>
auto guarded(const char* step, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(ErrorKind::DegenerateConfiguration, std::string(step) + ": " + e.what());
  }
}

Point2D meet(Point2D p1, Point2D p2, Point2D q1, Point2D q2, const char* step) {
  return guarded(step, [&] { return intersect_lines(line_through(p1, p2), line_through(q1, q2)); });
}

double affine_param(Point2D x, Point2D origin, Point2D end) {
  const Point2D d = end - origin;
  return dot(x - origin, d) / dot(d, d);
}

// Point Z on segment line origin->end such that DQ(origin, end, ref, Z) = q.
Point2D place_by_quotient(Point2D origin, Point2D end, Point2D ref, double q) {
  const double d = affine_param(ref, origin, end);
  const double denom = d * (1.0 - q) + q;
  if (std::abs(denom) <= tolerance::kDegeneracy * (std::abs(d) + std::abs(q) + 1.0)) {
    throw Error(ErrorKind::DegenerateConfiguration, "transferred trace lies at infinity");
  }
  const double z = d / denom;
  return origin + z * (end - origin);
}

}  // namespace

void PlanarBasis::validate() const {
  if (collinear(a, b, c) || collinear(a, b, d) || collinear(a, c, d) || collinear(b, c, d)) {
    throw Error(ErrorKind::DegenerateConfiguration, "planar basis has three collinear points");
  }
}

DqCoordinates dq_coordinates(Point2D z, const PlanarBasis& basis) {
  basis.validate();
  const Point2D d_b = meet(basis.d, basis.b, basis.a, basis.c, "D_B");
  const Point2D d_c = meet(basis.d, basis.c, basis.a, basis.b, "D_C");
  const Point2D z_b = meet(z, basis.b, basis.a, basis.c, "Z_B");
  const Point2D z_c = meet(z, basis.c, basis.a, basis.b, "Z_C");
  DqCoordinates out;
  out.q_c = guarded("q_c", [&] { return cross_ratio(basis.a, basis.c, d_b, z_b); });
  out.q_b = guarded("q_b", [&] { return cross_ratio(basis.a, basis.b, d_c, z_c); });
  if (!std::isfinite(out.q_c) || !std::isfinite(out.q_b)) {
    throw Error(ErrorKind::DegenerateConfiguration, "non-finite double-quotient coordinates");
  }
  return out;
}

Point2D transfer_point(const DqCoordinates& coords, const PlanarBasis& target) {
  target.validate();
  const Point2D d_b = meet(target.d, target.b, target.a, target.c, "D_B");
  const Point2D d_c = meet(target.d, target.c, target.a, target.b, "D_C");
  const Point2D z_b = place_by_quotient(target.a, target.c, d_b, coords.q_c);
  const Point2D z_c = place_by_quotient(target.a, target.b, d_c, coords.q_b);
  return meet(target.b, z_b, target.c, z_c, "Z");
}

FrameQuotients frame1_quotients(const LabeledFrame& frame1) {
  const Point2D r = frame1.at("R");
  const Point2D p = frame1.at("P");
  const Point2D q = frame1.at("Q");
  const Point2D a = frame1.at("A");
  const Point2D c = frame1.at("C");
  const Point2D e = frame1.at("E");
  const Point2D g = frame1.at("G");
  if (collinear(r, q, p)) {
    throw Error(ErrorKind::DegenerateConfiguration, "R', Q', P' are collinear");
  }

  // X_P = X'P' ∩ R'Q' and X_Q = X'Q' ∩ R'P'.
  auto trace_p = [&](Point2D x) { return meet(x, p, r, q, "trace on R'Q'"); };
  auto trace_q = [&](Point2D x) { return meet(x, q, r, p, "trace on R'P'"); };
  const Point2D a_p = trace_p(a);
  const Point2D a_q = trace_q(a);

  auto quotient_p = [&](Point2D x) {
    const Point2D x_p = trace_p(x);
    return guarded("quotient on R'Q'", [&] { return cross_ratio(r, q, a_p, x_p); });
  };
  auto quotient_q = [&](Point2D x) {
    const Point2D x_q = trace_q(x);
    return guarded("quotient on R'P'", [&] { return cross_ratio(r, p, a_q, x_q); });
  };

  FrameQuotients out;
  out.cp = quotient_p(c);
  out.cq = quotient_q(c);
  out.ep = quotient_p(e);
  out.eq = quotient_q(e);
  out.gp = quotient_p(g);
  out.gq = quotient_q(g);
  return out;
}

}  // namespace rigidview
