#include "support.hpp"

#include "rigidview/geometry.hpp"

using namespace rigidview;
using testing::thrown_kind;

TEST_CASE("lines are normalized to a unique representation") {
  const Line2D l = Line2D::from_coefficients(-3.0, -4.0, 10.0);
  CHECK(l.a() == doctest::Approx(0.6));
  CHECK(l.b() == doctest::Approx(0.8));
  CHECK(l.c() == doctest::Approx(-2.0));
  const Line2D m = Line2D::from_coefficients(0.0, -2.0, 1.0);
  CHECK(m.a() == 0.0);
  CHECK(m.b() == doctest::Approx(1.0));
  CHECK(thrown_kind([] { Line2D::from_coefficients(0.0, 0.0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("line through two points contains both, in either order") {
  const Point2D p{1.5, -2.0}, q{-3.0, 7.25};
  const Line2D l = line_through(p, q), r = line_through(q, p);
  CHECK(point_line_distance(p, l) < 1e-15);
  CHECK(point_line_distance(q, l) < 1e-14);
  CHECK(l.a() == doctest::Approx(r.a()));
  CHECK(l.c() == doctest::Approx(r.c()));
  CHECK(thrown_kind([&] { line_through(p, p); }) == ErrorKind::CoincidentPoints);
}

TEST_CASE("intersections") {
  const Line2D x = line_through({0, 0}, {1, 0}), y = line_through({2, -1}, {2, 5});
  const Point2D i = intersect_lines(x, y);
  CHECK(i.x == doctest::Approx(2.0));
  CHECK(i.y == doctest::Approx(0.0));
  const Line2D x2 = line_through({0, 1}, {3, 1});
  CHECK(thrown_kind([&] { intersect_lines(x, x2); }) == ErrorKind::ParallelLines);
}

TEST_CASE("collinearity is judged relative to the triple's extent") {
  CHECK(collinear({0, 0}, {1e6, 1e6}, {2e6, 2e6 + 1e-6}));
  CHECK_FALSE(collinear({0, 0}, {1, 0}, {0.5, 1e-3}));
}

TEST_CASE("affine maps") {
  const AffineMap2D m({2.0, 1.0, -1.0, 3.0}, {0.5, -4.0});
  const Point2D p{1.25, -0.75};
  const Point2D back = m.inverse().apply(m.apply(p));
  CHECK(back.x == doctest::Approx(p.x));
  CHECK(back.y == doctest::Approx(p.y));
  const Point2D c = m.compose(m.inverse()).apply(p);
  CHECK(c.x == doctest::Approx(p.x));
  CHECK(thrown_kind([] { AffineMap2D({1, 2, 2, 4}, {0, 0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("canonical frame map sends R, Q, P to the unit corners") {
  const Point2D r{1.0, 3.29}, q{3.0, 11.5}, p{1.84, 5.53};
  const AffineMap2D m = canonical_frame_map(r, q, p);
  const Point2D cr = m.apply(r), cq = m.apply(q), cp = m.apply(p);
  CHECK(cr.norm() < 1e-14);
  CHECK(distance(cq, {1, 0}) < 1e-14);
  CHECK(distance(cp, {0, 1}) < 1e-14);
  CHECK(thrown_kind([] { canonical_frame_map({0, 0}, {1, 1}, {2, 2}); }) == ErrorKind::CollinearBasis);
}

TEST_CASE("cross ratio matches the parametric formula") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Point2D o{u(rng), u(rng)}, dir{u(rng), u(rng)};
    const double ta = u(rng), tb = u(rng), tc = u(rng), td = u(rng);
    if (std::min({std::abs(ta - td), std::abs(tb - tc), std::abs(tb - td), std::abs(ta - tc)}) < 0.1) continue;
    const auto at = [&](double t) { return o + t * dir; };
    const double want = ((tc - ta) / (td - ta)) / ((tc - tb) / (td - tb));
    CHECK(cross_ratio(at(ta), at(tb), at(tc), at(td)) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("cross ratio is invariant under projective maps") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto H = testing::random_homography(rng);
    const Point2D o{u(rng), u(rng)}, dir{u(rng), u(rng)};
    if (dir.norm() < 0.2) continue;
    const Point2D a = o, b = o + 0.3 * dir, c = o + 0.7 * dir, d = o + 1.1 * dir;
    const double before = cross_ratio(a, b, c, d);
    const double after = cross_ratio(H.apply(a), H.apply(b), H.apply(c), H.apply(d));
    worst = std::max(worst, std::abs(after - before) / std::abs(before));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("swapping C and D inverts the cross ratio") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Point2D o{u(rng), u(rng)}, dir{u(rng), u(rng)};
    const double t[4] = {0.0, 1.0 + std::abs(u(rng)), 12.0 + std::abs(u(rng)), -1.0 - std::abs(u(rng))};
    const Point2D a = o + t[0] * dir, b = o + t[1] * dir, c = o + t[2] * dir, d = o + t[3] * dir;
    CHECK(std::abs(cross_ratio(a, b, c, d) * cross_ratio(a, b, d, c) - 1.0) <= 1e-12);
  }
}

TEST_CASE("cross ratio rejects degenerate quadruples") {
  CHECK(thrown_kind([] { cross_ratio({0, 0}, {1, 0}, {2, 0}, {3, 1}); }) == ErrorKind::NotCollinear);
  CHECK(thrown_kind([] { cross_ratio({0, 0}, {1, 0}, {2, 0}, {0, 0}); }) == ErrorKind::DegenerateQuadruple);
  CHECK(thrown_kind([] { cross_ratio({1, 1}, {1, 1}, {1, 1}, {1, 1}); }) == ErrorKind::DegenerateQuadruple);
}
