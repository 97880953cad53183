#include "rigidview/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rigidview/error.hpp"

namespace rigidview {

Line2D Line2D::from_coefficients(double a, double b, double c) {
  const double n = std::hypot(a, b);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(c)) {
    throw Error(ErrorKind::InvalidArgument, "line normal must be finite and nonzero");
  }
  a /= n;
  b /= n;
  c /= n;
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  return Line2D(a, b, c);
}

AffineMap2D::AffineMap2D(std::array<double, 4> linear_row_major, Point2D translation)
    : m_(linear_row_major), t_(translation) {
  const double det = determinant();
  const double scale = std::max({std::abs(m_[0]), std::abs(m_[1]), std::abs(m_[2]), std::abs(m_[3])});
  if (!(std::abs(det) > tolerance::kDegeneracy * scale * scale)) {
    throw Error(ErrorKind::InvalidArgument, "affine map linear part is singular");
  }
}

Point2D AffineMap2D::apply(Point2D p) const {
  return {m_[0] * p.x + m_[1] * p.y + t_.x, m_[2] * p.x + m_[3] * p.y + t_.y};
}

AffineMap2D AffineMap2D::inverse() const {
  const double det = determinant();
  const std::array<double, 4> inv{m_[3] / det, -m_[1] / det, -m_[2] / det, m_[0] / det};
  const Point2D t{-(inv[0] * t_.x + inv[1] * t_.y), -(inv[2] * t_.x + inv[3] * t_.y)};
  return AffineMap2D(inv, t);
}

AffineMap2D AffineMap2D::compose(const AffineMap2D& inner) const {
  const auto& n = inner.m_;
  const std::array<double, 4> m{m_[0] * n[0] + m_[1] * n[2], m_[0] * n[1] + m_[1] * n[3],
                                m_[2] * n[0] + m_[3] * n[2], m_[2] * n[1] + m_[3] * n[3]};
  return AffineMap2D(m, apply(inner.t_));
}

double coordinate_scale(std::initializer_list<Point2D> pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

bool collinear(Point2D p, Point2D q, Point2D r, double rel_tol) {
  const double longest = std::max({distance(p, q), distance(q, r), distance(r, p)});
  if (longest == 0.0) return true;
  const double height = std::abs(cross(q - p, r - p)) / longest;
  const double extent = std::max({std::max({p.x, q.x, r.x}) - std::min({p.x, q.x, r.x}),
                                  std::max({p.y, q.y, r.y}) - std::min({p.y, q.y, r.y})});
  return height < rel_tol * extent;
}

Line2D line_through(Point2D p, Point2D q) {
  if (!(distance(p, q) > tolerance::kDegeneracy * coordinate_scale({p, q}))) {
    throw Error(ErrorKind::CoincidentPoints, "cannot draw a line through coincident points");
  }
  return Line2D::from_coefficients(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y);
}

Point2D intersect_lines(const Line2D& l1, const Line2D& l2) {
  // With unit normals the determinant is the sine of the angle between them.
  const double det = l1.a() * l2.b() - l2.a() * l1.b();
  if (std::abs(det) < tolerance::kDegeneracy) {
    throw Error(ErrorKind::ParallelLines, "lines are parallel");
  }
  return {(l1.b() * l2.c() - l2.b() * l1.c()) / det, (l1.c() * l2.a() - l2.c() * l1.a()) / det};
}

double point_line_distance(Point2D p, const Line2D& l) { return std::abs(l.signed_distance(p)); }

double cross_ratio(Point2D a, Point2D b, Point2D c, Point2D d) {
  const std::array<Point2D, 4> pts{a, b, c, d};
  // Parameterize along the direction of the most distant pair.
  Point2D origin = a;
  Point2D dir{};
  double best = -1.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double len = distance(pts[i], pts[j]);
      if (len > best) {
        best = len;
        origin = pts[i];
        dir = pts[j] - pts[i];
      }
    }
  }
  const double scale = coordinate_scale({a, b, c, d});
  if (!(best > tolerance::kDegeneracy * scale)) {
    throw Error(ErrorKind::DegenerateQuadruple, "all four points coincide");
  }
  dir = (1.0 / best) * dir;
  std::array<double, 4> t{};
  for (size_t i = 0; i < pts.size(); ++i) {
    const Point2D rel = pts[i] - origin;
    if (std::abs(cross(dir, rel)) > tolerance::kCollinear * best + tolerance::kDegeneracy * scale) {
      throw Error(ErrorKind::NotCollinear, "cross ratio needs four collinear points");
    }
    t[i] = dot(dir, rel);
  }
  const double ac = t[2] - t[0];
  const double ad = t[3] - t[0];
  const double bc = t[2] - t[1];
  const double bd = t[3] - t[1];
  const double eps = tolerance::kDegeneracy * best;
  if (std::abs(ad) <= eps || std::abs(bc) <= eps) {
    throw Error(ErrorKind::DegenerateQuadruple, "A coincides with D or B coincides with C");
  }
  return (ac * bd) / (ad * bc);
}

AffineMap2D canonical_frame_map(Point2D r, Point2D q, Point2D p) {
  if (collinear(r, q, p)) {
    throw Error(ErrorKind::CollinearBasis, "R, Q, P are collinear");
  }
  // Columns of the forward basis are q - r and p - r; invert that.
  const Point2D e1 = q - r;
  const Point2D e2 = p - r;
  const double det = e1.x * e2.y - e2.x * e1.y;
  const std::array<double, 4> inv{e2.y / det, -e2.x / det, -e1.y / det, e1.x / det};
  const Point2D t{-(inv[0] * r.x + inv[1] * r.y), -(inv[2] * r.x + inv[3] * r.y)};
  return AffineMap2D(inv, t);
}

}  // namespace rigidview
