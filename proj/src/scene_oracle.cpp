#include "rigidview/scene_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "rigidview/dq_transfer.hpp"
#include "rigidview/error.hpp"
#include "rigidview/focal_locator.hpp"

namespace rigidview {

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 vec(Point3D p) { return {p.x, p.y, p.z}; }
Point3D pt(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 plane_normal(const CameraModel& cam) { return vec(cam.axis_x).cross(vec(cam.axis_y)); }

Vec3 lift(Point2D image, const CameraModel& cam) {
  return vec(cam.plane_origin) + image.x * vec(cam.axis_x) + image.y * vec(cam.axis_y);
}

// Intersection of the line through a and b with the plane through p, q, r.
Vec3 line_plane(const Vec3& a, const Vec3& b, const Vec3& p, const Vec3& q, const Vec3& r) {
  const Vec3 n = (q - p).cross(r - p);
  const Vec3 d = b - a;
  const double denom = n.dot(d);
  if (std::abs(denom) <= 1e-12 * n.norm() * d.norm()) {
    throw Error(ErrorKind::RayParallelToPlane, "line is parallel to plane PQR");
  }
  return a + (n.dot(p - a) / denom) * d;
}

// Smallest volume / longest-edge^3 over basis quadruples.
double coplanar_margin(const std::vector<Vec3>& x) {
  double margin = std::numeric_limits<double>::infinity();
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k)
        for (size_t l = k + 1; l < n; ++l) {
          double len = 0.0;
          for (const auto& [a, b] : {std::pair{i, j}, {i, k}, {i, l}, {j, k}, {j, l}, {k, l}}) {
            len = std::max(len, (x[a] - x[b]).norm());
          }
          const double vol = std::abs((x[j] - x[i]).cross(x[k] - x[i]).dot(x[l] - x[i]));
          margin = std::min(margin, len > 0.0 ? vol / (len * len * len) : 0.0);
        }
  return margin;
}

// Smallest triangle height / bounding extent over image triples, the
// quantity collinear() thresholds.
double collinear_margin(const LabeledFrame& f) {
  std::vector<Point2D> pts;
  for (const auto& label : f.labels()) pts.push_back(f.at(label));
  double margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      for (size_t k = j + 1; k < pts.size(); ++k) {
        const Point2D p = pts[i], q = pts[j], r = pts[k];
        const double longest = std::max({distance(p, q), distance(q, r), distance(r, p)});
        const double extent = std::max({std::max({p.x, q.x, r.x}) - std::min({p.x, q.x, r.x}),
                                        std::max({p.y, q.y, r.y}) - std::min({p.y, q.y, r.y})});
        const double height = longest > 0.0 ? std::abs(cross(q - p, r - p)) / longest : 0.0;
        margin = std::min(margin, extent > 0.0 ? height / extent : 0.0);
      }
  return margin;
}

// How far the true auxiliary points B, D, F, H stay from their image points
// and from the trace singularities u = 1, v = 1, u v = 1; 0 when a
// construction fails outright.
double trace_margin(const RigidScene& scene, const CameraModel& cam1, const CameraModel& cam2,
                    const LabeledFrame& frame2) {
  double margin = std::numeric_limits<double>::infinity();
  try {
    const Vec3 f1 = vec(cam1.focal_point);
    const Vec3 p = vec(scene.at("P")), q = vec(scene.at("Q")), r = vec(scene.at("R"));
    const AffineMap2D canon = canonical_frame_map(frame2.at("R"), frame2.at("Q"), frame2.at("P"));
    const double scale = coordinate_scale({frame2.at("R"), frame2.at("Q"), frame2.at("P"), frame2.at("A")});
    for (const char* label : {"A", "C", "E", "G"}) {
      const Vec3 x = vec(scene.at(label));
      const Point2D aux = project_point(pt(line_plane(f1, x, p, q, r)), cam2);
      margin = std::min(margin, distance(aux, frame2.at(label)) / scale);
      const TraceParams t = point_to_traces(canon.apply(aux));
      for (double w : {t.u, t.v, t.u * t.v}) {
        if (!std::isfinite(w)) return 0.0;
        margin = std::min(margin, std::abs(w - 1.0) / (1.0 + std::abs(w)));
      }
    }
  } catch (const Error&) {
    return 0.0;
  }
  return margin;
}

struct Normalizer {
  Point2D center;
  double scale = 1.0;
};

Normalizer normalizer(const std::vector<Point2D>& pts) {
  Point2D c;
  for (const Point2D& p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  double mean = 0.0;
  for (const Point2D& p : pts) mean += distance(p, c);
  mean /= static_cast<double>(pts.size());
  if (mean <= 0.0) throw Error(ErrorKind::DegenerateConfiguration, "all points coincide");
  return {c, std::sqrt(2.0) / mean};
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec3 v(n(rng), n(rng), n(rng));
    if (v.norm() > 1e-6) return v.normalized();
  }
}

CameraModel random_camera(std::mt19937_64& rng, const SceneOptions& o) {
  const Vec3 center(0.5, 0.5, 0.5);
  const Vec3 dir = random_unit(rng);
  const double dist = std::uniform_real_distribution<double>(o.min_camera_distance, o.max_camera_distance)(rng);
  const double focal = std::uniform_real_distribution<double>(o.min_focal_length, o.max_focal_length)(rng);
  const Vec3 f = center + dist * dir;
  const Vec3 view = -dir;
  Vec3 ax = random_unit(rng);
  ax = (ax - ax.dot(view) * view);
  if (ax.norm() < 1e-6) ax = view.unitOrthogonal();
  ax.normalize();
  const Vec3 ay = view.cross(ax);
  CameraModel cam;
  cam.focal_point = pt(f);
  cam.plane_origin = pt(f + focal * view);
  cam.axis_x = pt(ax);
  cam.axis_y = pt(ay);
  return cam;
}

std::string point_label(int i) {
  static const std::array<const char*, 7> basis{"R", "P", "Q", "A", "C", "E", "G"};
  if (i < 7) return basis[static_cast<size_t>(i)];
  return i == 7 ? "Z" : "Z" + std::to_string(i - 6);
}

}  // namespace

void CameraModel::validate() const {
  const Vec3 ax = vec(axis_x), ay = vec(axis_y);
  if (std::abs(ax.norm() - 1.0) > 1e-9 || std::abs(ay.norm() - 1.0) > 1e-9 || std::abs(ax.dot(ay)) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "camera axes are not orthonormal");
  }
  if (std::abs(plane_normal(*this).dot(vec(focal_point) - vec(plane_origin))) <= 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "focal point lies on the image plane");
  }
}

Point3D RigidScene::at(const std::string& label) const {
  for (const auto& [l, p] : points) {
    if (l == label) return p;
  }
  throw Error(ErrorKind::MissingLabel, "scene has no point '" + label + "'");
}

Point2D project_point(Point3D x, const CameraModel& cam) {
  const Vec3 f = vec(cam.focal_point);
  const Vec3 d = vec(x) - f;
  const double len = d.norm();
  const double scale = std::max({1.0, f.norm(), vec(x).norm()});
  if (len <= 1e-12 * scale) throw Error(ErrorKind::PointAtFocus, "scene point coincides with the focal point");
  const Vec3 n = plane_normal(cam);
  const double denom = n.dot(d);
  if (std::abs(denom) <= 1e-12 * len) {
    throw Error(ErrorKind::RayParallelToPlane, "projection ray is parallel to the image plane");
  }
  const Vec3 hit = f + (n.dot(vec(cam.plane_origin) - f) / denom) * d;
  const Vec3 rel = hit - vec(cam.plane_origin);
  return {rel.dot(vec(cam.axis_x)), rel.dot(vec(cam.axis_y))};
}

LabeledFrame project(const RigidScene& scene, const CameraModel& cam, const std::string& frame_id) {
  LabeledFrame frame(frame_id);
  for (const auto& [label, p] : scene.points) frame.add(label, project_point(p, cam));
  return frame;
}

Point2D true_projected_focal(const CameraModel& cam1, const CameraModel& cam2) {
  return project_point(cam1.focal_point, cam2);
}

int seven_point_solution_count(const LabeledFrame& frame1, const LabeledFrame& frame2) {
  std::vector<Point2D> x1, x2;
  for (const auto& label : basis_labels()) {
    x1.push_back(frame1.at(label));
    x2.push_back(frame2.at(label));
  }
  const Normalizer n1 = normalizer(x1), n2 = normalizer(x2);
  Eigen::Matrix<double, 7, 9> a;
  for (int i = 0; i < 7; ++i) {
    const Point2D p = n1.scale * (x1[i] - n1.center);
    const Point2D q = n2.scale * (x2[i] - n2.center);
    a.row(i) << q.x * p.x, q.x * p.y, q.x, q.y * p.x, q.y * p.y, q.y, p.x, p.y, 1.0;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 7, 9>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> v1 = svd.matrixV().col(7);
  const Eigen::Matrix<double, 9, 1> v2 = svd.matrixV().col(8);
  auto det_at = [&](double c, double s) {
    const Eigen::Matrix<double, 9, 1> f = c * v1 + s * v2;
    Eigen::Matrix3d m;
    m << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
    return m.determinant();
  };
  // det(c F1 + s F2) = k3 c^3 + k2 c^2 s + k1 c s^2 + k0 s^3.
  const double k3 = det_at(1.0, 0.0);
  const double k0 = det_at(0.0, 1.0);
  const double plus = det_at(1.0, 1.0) - k3 - k0;    // k2 + k1
  const double minus = det_at(1.0, -1.0) - k3 + k0;  // k1 - k2
  double c[4] = {k3, 0.5 * (plus - minus), 0.5 * (plus + minus), k0};
  const double m = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
  if (m == 0.0) throw Error(ErrorKind::DegenerateConfiguration, "seven-point cubic vanishes identically");
  for (double& x : c) x /= m;
  const double disc = 18.0 * c[0] * c[1] * c[2] * c[3] - 4.0 * c[1] * c[1] * c[1] * c[3] + c[1] * c[1] * c[2] * c[2] -
                      4.0 * c[0] * c[2] * c[2] * c[2] - 27.0 * c[0] * c[0] * c[3] * c[3];
  return disc > 0.0 ? 3 : (disc < 0.0 ? 1 : 2);
}

SceneCertificate certify(RigidScene& scene, const CameraModel& cam1, const CameraModel& cam2,
                         const SceneOptions& options) {
  SceneCertificate cert;
  std::vector<Vec3> basis;
  for (const auto& label : basis_labels()) basis.push_back(vec(scene.at(label)));
  cert.coplanar_margin = coplanar_margin(basis);
  cert.no_four_coplanar = cert.coplanar_margin > options.rel_tol;

  LabeledFrame f1, f2;
  try {
    f1 = project(scene, cam1);
    f2 = project(scene, cam2);
  } catch (const Error&) {
    scene.certificate = cert;
    return cert;
  }
  cert.collinear_margin = std::min(collinear_margin(f1), collinear_margin(f2));
  cert.no_collinear_images = cert.collinear_margin >= options.rel_tol;
  if (cert.no_collinear_images) {
    cert.trace_margin = trace_margin(scene, cam1, cam2, f2);
    cert.traces_generic = cert.trace_margin > options.rel_tol;
  }

  try {
    const Point2D f1pp = true_projected_focal(cam1, cam2);
    double extent = 0.0;
    Point2D centroid;
    for (const auto& label : f2.labels()) centroid = centroid + f2.at(label);
    centroid = (1.0 / static_cast<double>(f2.size())) * centroid;
    for (const auto& label : f2.labels()) extent = std::max(extent, distance(centroid, f2.at(label)));
    cert.focal_image_bounded = std::isfinite(f1pp.x) && std::isfinite(f1pp.y) &&
                               distance(f1pp, centroid) <= options.max_focal_image_extent * extent;
  } catch (const Error&) {
    cert.focal_image_bounded = false;
  }

  if (cert.no_collinear_images) {
    try {
      cert.unique_seven_point = seven_point_solution_count(f1, f2) == 1;
    } catch (const Error&) {
      cert.unique_seven_point = false;
    }
  }
  scene.certificate = cert;
  return cert;
}

SceneSample random_rigid_scene(int points, std::uint64_t seed, const SceneOptions& options) {
  if (points < 7) throw Error(ErrorKind::InvalidArgument, "a rigid scene needs at least 7 points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    SceneSample s;
    for (int i = 0; i < points; ++i) s.scene.points.emplace_back(point_label(i), Point3D{unit(rng), unit(rng), unit(rng)});
    s.cam1 = random_camera(rng, options);
    s.cam2 = random_camera(rng, options);
    const SceneCertificate c = certify(s.scene, s.cam1, s.cam2, options);
    const bool unique_ok = c.unique_seven_point || !options.require_unique_seven_point;
    if (c.no_four_coplanar && c.no_collinear_images && c.traces_generic && c.focal_image_bounded && unique_ok) {
      s.attempts = attempt;
      return s;
    }
  }
  throw Error(ErrorKind::GenerationFailed,
              "no certified scene after " + std::to_string(options.max_attempts) + " attempts (seed " +
                  std::to_string(seed) + ")");
}

AmbiguityResult ambiguity_family(const RigidScene& scene, const CameraModel& cam1, const CameraModel& cam2, double t,
                                 MovedFocal moved) {
  if (std::abs(t - 1.0) <= 1e-12) throw Error(ErrorKind::InvalidArgument, "t = 1 puts both focal points together");
  const Vec3 f1 = vec(cam1.focal_point), f2 = vec(cam2.focal_point);
  AmbiguityResult out;
  out.cam1 = cam1;
  out.cam2 = cam2;
  CameraModel& target = moved == MovedFocal::First ? out.cam1 : out.cam2;
  const Vec3 from = moved == MovedFocal::First ? f1 : f2;
  const Vec3 towards = moved == MovedFocal::First ? f2 : f1;
  target.focal_point = pt(from + t * (towards - from));
  const double off_plane = std::abs(plane_normal(target).dot(vec(target.focal_point) - vec(target.plane_origin)));
  if (off_plane <= 1e-12 * std::max(1.0, (f2 - f1).norm())) {
    throw Error(ErrorKind::InvalidArgument, "moved focal point lies on its image plane");
  }

  const Vec3 o1 = vec(out.cam1.focal_point), o2 = vec(out.cam2.focal_point);
  for (const auto& [label, x] : scene.points) {
    const Vec3 d1 = lift(project_point(x, cam1), cam1) - o1;
    const Vec3 d2 = lift(project_point(x, cam2), cam2) - o2;
    const Vec3 w = o1 - o2;
    const double a = d1.dot(d1), b = d1.dot(d2), c = d2.dot(d2), d = d1.dot(w), e = d2.dot(w);
    const double denom = a * c - b * b;
    if (denom <= 1e-24 * a * c) throw Error(ErrorKind::RaysParallel, "rays through '" + label + "' are parallel");
    const double s1 = (b * e - c * d) / denom;
    const double s2 = (a * e - b * d) / denom;
    const Vec3 p1 = o1 + s1 * d1, p2 = o2 + s2 * d2;
    out.max_ray_gap = std::max(out.max_ray_gap, (p1 - p2).norm());
    out.scene.points.emplace_back(label, pt(0.5 * (p1 + p2)));
  }
  return out;
}

std::vector<double> shape_signature(const RigidScene& scene) {
  std::vector<double> d;
  const auto& pts = scene.points;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d.push_back((vec(pts[i].second) - vec(pts[j].second)).norm());
  std::sort(d.begin(), d.end());
  if (!d.empty() && d.back() > 0.0) {
    const double m = d.back();
    for (double& x : d) x /= m;
  }
  return d;
}

double signature_divergence(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double reprojection_residual(const RigidScene& scene, const CameraModel& cam, const LabeledFrame& frame) {
  double m = 0.0;
  for (const auto& [label, x] : scene.points) {
    if (const auto obs = frame.find(label)) m = std::max(m, distance(project_point(x, cam), *obs));
  }
  return m;
}

}  // namespace rigidview
