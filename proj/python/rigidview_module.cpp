#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rigidview/correspondence_matcher.hpp"
#include "rigidview/dof_ledger.hpp"
#include "rigidview/epipolar_predictor.hpp"
#include "rigidview/error.hpp"
#include "rigidview/focal_locator.hpp"
#include "rigidview/geometry.hpp"
#include "rigidview/scene_oracle.hpp"

namespace py = pybind11;
using namespace rigidview;

namespace {

using PointMap = std::vector<std::pair<std::string, std::pair<double, double>>>;

LabeledFrame to_frame(const PointMap& pts, const std::string& id) {
  LabeledFrame f(id);
  for (const auto& [label, xy] : pts) f.add(label, {xy.first, xy.second});
  return f;
}

PointMap from_frame(const LabeledFrame& f) {
  PointMap out;
  for (const auto& label : f.labels()) out.emplace_back(label, std::pair{f.at(label).x, f.at(label).y});
  return out;
}

std::vector<Point2D> to_points(const std::vector<std::pair<double, double>>& xs) {
  std::vector<Point2D> out;
  for (const auto& [x, y] : xs) out.push_back({x, y});
  return out;
}

std::pair<double, double> xy(Point2D p) { return {p.x, p.y}; }

}  // namespace

PYBIND11_MODULE(_rigidview, m) {
  m.doc() = "Two-view rigid-body geometry from point projections";

  static py::exception<Error> error(m, "RigidviewError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("cross_ratio", [](std::pair<double, double> a, std::pair<double, double> b, std::pair<double, double> c,
                          std::pair<double, double> d) {
    return cross_ratio({a.first, a.second}, {b.first, b.second}, {c.first, c.second}, {d.first, d.second});
  });

  m.def(
      "locate_focal",
      [](const PointMap& f1, const PointMap& f2, const std::string& search) {
        FocalOptions o;
        o.search = search == "isolation" ? RootSearch::Isolation : RootSearch::Scan;
        const FocalSolution s = locate_projected_focal(to_frame(f1, "1"), to_frame(f2, "2"), o);
        py::dict d;
        d["f1pp"] = xy(s.f1pp);
        d["u"] = s.u_root;
        d["v"] = s.v_root;
        d["concurrency_residual"] = s.concurrency_residual;
        d["candidates"] = s.all_roots.size();
        return d;
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("search") = "scan",
      "Image of frame 1's focal point in frame 2; frames are lists of (label, (x, y)).");

  m.def(
      "predict_line",
      [](const PointMap& f1, const PointMap& f2, const std::string& label) {
        const LabeledFrame a = to_frame(f1, "1"), b = to_frame(f2, "2");
        const PredictedLine l = predict_line(a.at(label), a, b, locate_projected_focal(a, b));
        return std::tuple{l.line.a(), l.line.b(), l.line.c()};
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("label"), "Line a*x + b*y + c = 0 in frame 2.");

  m.def(
      "match",
      [](const std::vector<std::pair<double, double>>& s1, const std::vector<std::pair<double, double>>& s2,
         std::uint64_t budget, int threads) {
        MatchOptions o;
        o.budget = budget;
        o.threads = threads;
        const MatchResult r = match_identities(to_points(s1), to_points(s2), o);
        py::dict d;
        d["assignment"] = r.assignment;
        d["badness"] = r.badness;
        d["runner_up_badness"] = r.runner_up_badness;
        d["evaluated"] = r.evaluated;
        return d;
      },
      py::arg("s1"), py::arg("s2"), py::arg("budget") = 5'000'000, py::arg("threads") = 1);

  m.def(
      "dof",
      [](const std::string& regime, int p, int k) {
        const DofVerdict v = verdict({parse_regime(regime), p, k});
        py::dict d;
        d["dof"] = v.dof;
        d["info"] = v.info;
        d["balanced"] = v.balanced;
        d["margin"] = v.margin;
        d["redundancy_caveat"] = v.redundancy_caveat;
        return d;
      },
      py::arg("regime"), py::arg("p"), py::arg("k"));
  m.def("min_points", [](const std::string& r, int k) { return min_points(parse_regime(r), k); });
  m.def("min_frames", [](const std::string& r, int p) { return min_frames(parse_regime(r), p); });

  m.def(
      "simulate",
      [](int points, std::uint64_t seed) {
        const SceneSample s = random_rigid_scene(points, seed);
        py::dict d;
        d["frame1"] = from_frame(project(s.scene, s.cam1, "1"));
        d["frame2"] = from_frame(project(s.scene, s.cam2, "2"));
        d["true_f1pp"] = xy(true_projected_focal(s.cam1, s.cam2));
        return d;
      },
      py::arg("points") = 8, py::arg("seed") = 1,
      "Certified random scene projected through two cameras.");
}
