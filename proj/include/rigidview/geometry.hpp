#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

namespace rigidview {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2D&, const Point2D&) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point2D a, Point2D b) { return (a - b).norm(); }

struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3D&, const Point3D&) = default;
};

/// Line {(x,y) : a*x + b*y + c = 0} with a^2 + b^2 = 1. The sign is fixed so
/// that a > 0, or a == 0 and b > 0, which makes the representation unique.
class Line2D {
 public:
  /// Throws InvalidArgument when (a, b) is zero.
  static Line2D from_coefficients(double a, double b, double c);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  /// Signed distance of p from the line.
  double signed_distance(Point2D p) const { return a_ * p.x + b_ * p.y + c_; }
  Point2D direction() const { return {-b_, a_}; }

 private:
  Line2D(double a, double b, double c) : a_(a), b_(b), c_(c) {}
  double a_;
  double b_;
  double c_;
};

/// x -> linear * x + translation.
class AffineMap2D {
 public:
  AffineMap2D(std::array<double, 4> linear_row_major, Point2D translation);

  static AffineMap2D identity() { return AffineMap2D({1.0, 0.0, 0.0, 1.0}, {0.0, 0.0}); }

  Point2D apply(Point2D p) const;
  AffineMap2D inverse() const;
  AffineMap2D compose(const AffineMap2D& inner) const;  // this o inner

  double determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  const std::array<double, 4>& linear() const { return m_; }
  Point2D translation() const { return t_; }

 private:
  std::array<double, 4> m_;
  Point2D t_;
};

namespace tolerance {
// Relative threshold for "same point" / "parallel" decisions.
inline constexpr double kDegeneracy = 1e-12;
// Triangle height over bounding scale below which a triple counts as collinear.
inline constexpr double kCollinear = 1e-9;
}  // namespace tolerance

/// Largest coordinate magnitude among the points, floored at 1.
double coordinate_scale(std::initializer_list<Point2D> pts);

/// True when r lies within tolerance::kCollinear * scale of line pq, where the
/// scale is the bounding extent of the triple.
bool collinear(Point2D p, Point2D q, Point2D r, double rel_tol = tolerance::kCollinear);

Line2D line_through(Point2D p, Point2D q);
Point2D intersect_lines(const Line2D& l1, const Line2D& l2);
double point_line_distance(Point2D p, const Line2D& l);

/// Double quotient (AC/AD):(BC/BD) of four collinear points, with every length
/// taken as a signed parameter difference along the common line.
double cross_ratio(Point2D a, Point2D b, Point2D c, Point2D d);

/// Affine map sending r -> (0,0), q -> (1,0), p -> (0,1).
AffineMap2D canonical_frame_map(Point2D r, Point2D q, Point2D p);

}  // namespace rigidview
