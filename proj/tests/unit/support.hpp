#pragma once

#include <doctest.h>

#include <array>
#include <random>
#include <string>

#include "rigidview/error.hpp"
#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"
#include "rigidview/scene_oracle.hpp"

namespace testing {

using rigidview::LabeledFrame;
using rigidview::Point2D;

// Runs f and returns the kind it threw; fails the test if it returned.
template <class F>
rigidview::ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const rigidview::Error& e) {
    return e.kind();
  }
  FAIL("expected a rigidview::Error");
  return rigidview::ErrorKind::InvalidArgument;
}

// Row-major 3x3 homography, kept well away from mapping the test region
// to infinity.
struct Homography {
  std::array<double, 9> h;
  Point2D apply(Point2D p) const {
    const double w = h[6] * p.x + h[7] * p.y + h[8];
    return {(h[0] * p.x + h[1] * p.y + h[2]) / w, (h[3] * p.x + h[4] * p.y + h[5]) / w};
  }
};

inline Homography random_homography(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Homography H{};
  for (;;) {
    for (int i = 0; i < 9; ++i) H.h[i] = (i % 4 == 0 ? 1.0 : 0.0) + 0.5 * u(rng);
    H.h[6] *= 0.1;
    H.h[7] *= 0.1;
    const auto& m = H.h;
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    if (std::abs(det) > 0.1) return H;
  }
}

struct Views {
  rigidview::SceneSample sample;
  LabeledFrame frame1, frame2;  // all points
  LabeledFrame basis1, basis2;  // the seven basis points only
  Point2D truth;
};

inline Views views(int points, std::uint64_t seed) {
  Views v{rigidview::random_rigid_scene(points, seed), {}, {}, LabeledFrame("1"), LabeledFrame("2"), {}};
  v.frame1 = rigidview::project(v.sample.scene, v.sample.cam1, "1");
  v.frame2 = rigidview::project(v.sample.scene, v.sample.cam2, "2");
  for (const auto& l : rigidview::basis_labels()) {
    v.basis1.add(l, v.frame1.at(l));
    v.basis2.add(l, v.frame2.at(l));
  }
  v.truth = rigidview::true_projected_focal(v.sample.cam1, v.sample.cam2);
  return v;
}

inline double rel_err(Point2D got, Point2D want) { return rigidview::distance(got, want) / std::max(1.0, want.norm()); }

inline LabeledFrame worked_frame(int which) {
  LabeledFrame f(which == 1 ? "frame1" : "frame2");
  if (which == 1) {
    f.add("R", {1.0, 3.29});
    f.add("Q", {3.0, 11.5});
    f.add("P", {1.84, 5.53});
    f.add("A", {1.82, 6.05});
    f.add("C", {1.63, 5.42});
    f.add("E", {2.09, 7.51});
    f.add("G", {1.74, 5.56});
  } else {
    f.add("R", {0.0, 0.0});
    f.add("Q", {1.0, 0.0});
    f.add("P", {0.0, 1.0});
    f.add("A", {23.8, 33.95});
    f.add("C", {21.2, 30.26});
    f.add("E", {15.59, 20.73});
    f.add("G", {16.92, 24.92});
  }
  return f;
}

}  // namespace testing
