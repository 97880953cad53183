#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"

namespace rigidview {

/// Pinhole camera: image coordinates are measured along two orthonormal axes
/// of a plane through plane_origin; focal_point must lie off the plane.
struct CameraModel {
  Point3D plane_origin;
  Point3D axis_x{1.0, 0.0, 0.0};
  Point3D axis_y{0.0, 1.0, 0.0};
  Point3D focal_point{0.0, 0.0, -1.0};

  /// Throws InvalidArgument when the axes are not orthonormal or the focal
  /// point is on the plane.
  void validate() const;
};

struct SceneCertificate {
  bool no_four_coplanar = false;
  bool no_collinear_images = false;
  bool traces_generic = false;  // true B,D,F,H traces away from u = 1, v = 1
  bool focal_image_bounded = false;
  bool unique_seven_point = false;

  // Relative distances from the degeneracies behind the first three flags,
  // compared against SceneOptions::rel_tol. 0 when not computed.
  double coplanar_margin = 0.0;
  double collinear_margin = 0.0;
  double trace_margin = 0.0;

  bool ok() const {
    return no_four_coplanar && no_collinear_images && traces_generic && focal_image_bounded && unique_seven_point;
  }
  double margin() const { return std::min({coplanar_margin, collinear_margin, trace_margin}); }
};

struct RigidScene {
  std::vector<std::pair<std::string, Point3D>> points;
  SceneCertificate certificate;

  /// Throws MissingLabel.
  Point3D at(const std::string& label) const;
};

/// Throws PointAtFocus or RayParallelToPlane.
Point2D project_point(Point3D x, const CameraModel& cam);
LabeledFrame project(const RigidScene& scene, const CameraModel& cam, const std::string& frame_id = "");

/// Image of cam1's focal point in cam2.
Point2D true_projected_focal(const CameraModel& cam1, const CameraModel& cam2);

struct SceneOptions {
  double min_camera_distance = 2.0;
  double max_camera_distance = 5.0;
  double min_focal_length = 0.5;
  double max_focal_length = 2.0;
  /// Relative margin for coplanarity, collinearity and trace degeneracy.
  double rel_tol = 1e-6;
  /// F1'' farther than this multiple of the image extent is rejected.
  double max_focal_image_extent = 1e3;
  bool require_unique_seven_point = true;
  int max_attempts = 1000;
};

struct SceneSample {
  RigidScene scene;
  CameraModel cam1;
  CameraModel cam2;
  int attempts = 0;
};

/// Labels R,P,Q,A,C,E,G then Z, Z2, Z3, ... Reproducible from seed.
/// Throws GenerationFailed after options.max_attempts rejections.
SceneSample random_rigid_scene(int points, std::uint64_t seed, const SceneOptions& options = {});

/// Fills scene.certificate for the two cameras and returns it.
SceneCertificate certify(RigidScene& scene, const CameraModel& cam1, const CameraModel& cam2,
                         const SceneOptions& options = {});

/// Number of real fundamental matrices through the seven basis
/// correspondences (1 or 3), by the classical linear 7-point construction.
int seven_point_solution_count(const LabeledFrame& frame1, const LabeledFrame& frame2);

enum class MovedFocal { First, Second };

struct AmbiguityResult {
  RigidScene scene;
  CameraModel cam1;
  CameraModel cam2;
  double max_ray_gap = 0.0;  // largest closest-approach distance of the paired rays
};

/// Slides one focal point along the line F1F2 (t is the affine coordinate
/// from the moved focal point towards the other) and re-intersects the
/// back-projected rays. Throws InvalidArgument for t = 1 or a focal point
/// landing on its plane, RaysParallel when a ray pair does not intersect.
AmbiguityResult ambiguity_family(const RigidScene& scene, const CameraModel& cam1, const CameraModel& cam2, double t,
                                 MovedFocal moved = MovedFocal::First);

/// Sorted pairwise distances divided by the largest one.
std::vector<double> shape_signature(const RigidScene& scene);
/// Largest entrywise difference; +inf when the lengths differ.
double signature_divergence(const std::vector<double>& a, const std::vector<double>& b);

/// Largest distance between the projection of each scene point and the
/// frame's observation with the same label.
double reprojection_residual(const RigidScene& scene, const CameraModel& cam, const LabeledFrame& frame);

}  // namespace rigidview
