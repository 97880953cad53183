#include "support.hpp"

#include "rigidview/scene_oracle.hpp"

using namespace rigidview;
using testing::thrown_kind;

TEST_CASE("generated scenes are certified and reproducible") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SceneSample a = random_rigid_scene(9, seed), b = random_rigid_scene(9, seed);
    const SceneCertificate& c = a.scene.certificate;
    CHECK(c.no_four_coplanar);
    CHECK(c.no_collinear_images);
    CHECK(c.traces_generic);
    CHECK(c.focal_image_bounded);
    CHECK(c.unique_seven_point);
    CHECK(c.margin() > 0.0);
    REQUIRE(a.scene.points.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(a.scene.points[i] == b.scene.points[i]);
    CHECK(a.cam2.focal_point == b.cam2.focal_point);
  }
  CHECK(random_rigid_scene(8, 1).scene.points[0] != random_rigid_scene(8, 2).scene.points[0]);
}

TEST_CASE("the true epipole is the projection of the other focal point") {
  const SceneSample s = random_rigid_scene(8, 5);
  const Point2D e = true_projected_focal(s.cam1, s.cam2);
  const Point2D p = project_point(s.cam1.focal_point, s.cam2);
  CHECK(distance(e, p) < 1e-12 * std::max(1.0, p.norm()));
}

TEST_CASE("projection lands on the ray through the focal point") {
  const SceneSample s = random_rigid_scene(8, 6);
  const CameraModel& c = s.cam1;
  for (const auto& [label, x] : s.scene.points) {
    const Point2D img = project_point(x, c);
    const Point3D onplane{c.plane_origin.x + img.x * c.axis_x.x + img.y * c.axis_y.x,
                          c.plane_origin.y + img.x * c.axis_x.y + img.y * c.axis_y.y,
                          c.plane_origin.z + img.x * c.axis_x.z + img.y * c.axis_y.z};
    // focal point, scene point and image point are collinear in space
    const double ax = x.x - c.focal_point.x, ay = x.y - c.focal_point.y, az = x.z - c.focal_point.z;
    const double bx = onplane.x - c.focal_point.x, by = onplane.y - c.focal_point.y, bz = onplane.z - c.focal_point.z;
    const double cx = ay * bz - az * by, cy = az * bx - ax * bz, cz = ax * by - ay * bx;
    CHECK(std::sqrt(cx * cx + cy * cy + cz * cz) <= 1e-10 * std::sqrt(ax * ax + ay * ay + az * az) *
                                                         std::sqrt(bx * bx + by * by + bz * bz));
  }
}

TEST_CASE("ambiguity family reprojects exactly and changes the shape") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SceneSample s = random_rigid_scene(8, seed);
    const LabeledFrame f1 = project(s.scene, s.cam1), f2 = project(s.scene, s.cam2);
    for (double t : {-0.5, 0.3, 0.7}) {
      for (MovedFocal m : {MovedFocal::First, MovedFocal::Second}) {
        const AmbiguityResult a = ambiguity_family(s.scene, s.cam1, s.cam2, t, m);
        CHECK(reprojection_residual(a.scene, a.cam1, f1) <= 1e-9);
        CHECK(reprojection_residual(a.scene, a.cam2, f2) <= 1e-9);
        CHECK(signature_divergence(shape_signature(a.scene), shape_signature(s.scene)) > 1e-3);
      }
    }
  }
}

TEST_CASE("t = 0 leaves the body unchanged") {
  const SceneSample s = random_rigid_scene(8, 3);
  const AmbiguityResult a = ambiguity_family(s.scene, s.cam1, s.cam2, 0.0);
  CHECK(signature_divergence(shape_signature(a.scene), shape_signature(s.scene)) < 1e-9);
  CHECK(thrown_kind([&] { ambiguity_family(s.scene, s.cam1, s.cam2, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("shape signatures are similarity invariant") {
  const SceneSample s = random_rigid_scene(8, 4);
  RigidScene moved = s.scene;
  for (auto& [label, x] : moved.points) x = {3.0 * x.y + 1.0, 3.0 * -x.x - 2.0, 3.0 * x.z + 0.5};
  CHECK(signature_divergence(shape_signature(moved), shape_signature(s.scene)) < 1e-12);
  CHECK(signature_divergence({0.1, 1.0}, {0.1, 0.5, 1.0}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("seven-point count on generated scenes") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const testing::Views v = testing::views(7, seed);
    CHECK(seven_point_solution_count(v.basis1, v.basis2) == 1);
  }
}

TEST_CASE("camera and scene validation") {
  CameraModel bad;
  bad.axis_y = {1.0, 0.0, 0.0};
  CHECK(thrown_kind([&] { bad.validate(); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { random_rigid_scene(6, 1); }) == ErrorKind::InvalidArgument);
  const SceneSample s = random_rigid_scene(8, 1);
  CHECK(thrown_kind([&] { s.scene.at("nope"); }) == ErrorKind::MissingLabel);
  CHECK(thrown_kind([&] { project_point(s.cam1.focal_point, s.cam1); }) == ErrorKind::PointAtFocus);
}
