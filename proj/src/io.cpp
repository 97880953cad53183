#include "rigidview/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rigidview/error.hpp"

namespace rigidview {

namespace {

double finite_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorKind::ParseError, what + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, what + " is not finite");
  return v;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, where + ": missing \"" + key + "\"");
  return j.at(key);
}

void add_point(LabeledFrame& f, const std::string& label, double x, double y, const std::string& where) {
  if (label.empty()) throw Error(ErrorKind::ParseError, where + ": empty label");
  if (f.contains(label)) throw Error(ErrorKind::ParseError, where + ": duplicate label '" + label + "'");
  f.add(label, {x, y});
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, where + ": '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error(ErrorKind::ParseError, where + ": '" + s + "' is not a finite number");
  return v;
}

Json vec3(Point3D p) { return Json::array({p.x, p.y, p.z}); }

Point3D vec3_from(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ParseError, what + " must be [x, y, z]");
  return {finite_number(j[0], what), finite_number(j[1], what), finite_number(j[2], what)};
}

Json camera_json(const CameraModel& c) {
  return Json{{"plane_origin", vec3(c.plane_origin)},
              {"axis_x", vec3(c.axis_x)},
              {"axis_y", vec3(c.axis_y)},
              {"focal_point", vec3(c.focal_point)}};
}

CameraModel camera_from(const Json& j, const std::string& where) {
  CameraModel c;
  c.plane_origin = vec3_from(field(j, "plane_origin", where), where + ".plane_origin");
  c.axis_x = vec3_from(field(j, "axis_x", where), where + ".axis_x");
  c.axis_y = vec3_from(field(j, "axis_y", where), where + ".axis_y");
  c.focal_point = vec3_from(field(j, "focal_point", where), where + ".focal_point");
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, where + ": " + e.message());
  }
  return c;
}

}  // namespace

LabeledFrame parse_frame_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
  }
  LabeledFrame f;
  if (j.is_object() && j.contains("frame_id")) {
    if (!j["frame_id"].is_string()) throw Error(ErrorKind::ParseError, "frame_id is not a string");
    f.set_frame_id(j["frame_id"].get<std::string>());
  }
  const Json& pts = field(j, "points", "frame");
  if (!pts.is_array()) throw Error(ErrorKind::ParseError, "\"points\" is not an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    const Json& label = field(pts[i], "label", where);
    if (!label.is_string()) throw Error(ErrorKind::ParseError, where + ": label is not a string");
    add_point(f, label.get<std::string>(), finite_number(field(pts[i], "x", where), where + ".x"),
              finite_number(field(pts[i], "y", where), where + ".y"), where);
  }
  return f;
}

LabeledFrame parse_frame_csv(const std::string& text, const std::string& frame_id) {
  std::istringstream in(text);
  std::string line;
  LabeledFrame f(frame_id);
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(trim(cell));
    const std::string where = "line " + std::to_string(lineno);
    if (!header) {
      if (cells != std::vector<std::string>{"label", "x", "y"}) {
        throw Error(ErrorKind::ParseError, where + ": expected header label,x,y");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3) throw Error(ErrorKind::ParseError, where + ": expected 3 fields");
    add_point(f, cells[0], parse_double(cells[1], where), parse_double(cells[2], where), where);
  }
  if (!header) throw Error(ErrorKind::ParseError, "empty CSV");
  return f;
}

LabeledFrame read_frame(const std::string& path) {
  const std::string text = read_text(path);
  try {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return parse_frame_csv(text);
    return parse_frame_json(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.message());
  }
}

Json frame_to_json(const LabeledFrame& frame) {
  Json pts = Json::array();
  for (const auto& label : frame.labels()) {
    const Point2D p = frame.at(label);
    pts.push_back({{"label", label}, {"x", p.x}, {"y", p.y}});
  }
  return Json{{"frame_id", frame.frame_id()}, {"points", pts}};
}

std::string frame_to_csv(const LabeledFrame& frame) {
  std::ostringstream out;
  out.precision(17);
  out << "label,x,y\n";
  for (const auto& label : frame.labels()) {
    const Point2D p = frame.at(label);
    out << label << ',' << p.x << ',' << p.y << '\n';
  }
  return out.str();
}

Json scene_to_json(const SceneFile& s) {
  Json pts = Json::array();
  for (const auto& [label, x] : s.scene.points) pts.push_back({{"label", label}, {"x", x.x}, {"y", x.y}, {"z", x.z}});
  const SceneCertificate& c = s.scene.certificate;
  Json j{{"points", pts},
         {"cam1", camera_json(s.cam1)},
         {"cam2", camera_json(s.cam2)},
         {"certificate",
          {{"no_four_coplanar", c.no_four_coplanar},
           {"no_collinear_images", c.no_collinear_images},
           {"traces_generic", c.traces_generic},
           {"focal_image_bounded", c.focal_image_bounded},
           {"unique_seven_point", c.unique_seven_point},
           {"coplanar_margin", c.coplanar_margin},
           {"collinear_margin", c.collinear_margin},
           {"trace_margin", c.trace_margin}}}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

SceneFile scene_from_json(const Json& j) {
  SceneFile s;
  const Json& pts = field(j, "points", "scene");
  if (!pts.is_array()) throw Error(ErrorKind::ParseError, "scene \"points\" is not an array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    const Json& label = field(pts[i], "label", where);
    if (!label.is_string()) throw Error(ErrorKind::ParseError, where + ": label is not a string");
    const std::string name = label.get<std::string>();
    for (const auto& [other, x] : s.scene.points) {
      if (other == name) throw Error(ErrorKind::ParseError, where + ": duplicate label '" + name + "'");
    }
    s.scene.points.emplace_back(name, Point3D{finite_number(field(pts[i], "x", where), where + ".x"),
                                              finite_number(field(pts[i], "y", where), where + ".y"),
                                              finite_number(field(pts[i], "z", where), where + ".z")});
  }
  s.cam1 = camera_from(field(j, "cam1", "scene"), "cam1");
  s.cam2 = camera_from(field(j, "cam2", "scene"), "cam2");
  if (j.contains("certificate") && j["certificate"].is_object()) {
    const Json& c = j["certificate"];
    SceneCertificate& cert = s.scene.certificate;
    cert.no_four_coplanar = c.value("no_four_coplanar", false);
    cert.no_collinear_images = c.value("no_collinear_images", false);
    cert.traces_generic = c.value("traces_generic", false);
    cert.focal_image_bounded = c.value("focal_image_bounded", false);
    cert.unique_seven_point = c.value("unique_seven_point", false);
    cert.coplanar_margin = c.value("coplanar_margin", 0.0);
    cert.collinear_margin = c.value("collinear_margin", 0.0);
    cert.trace_margin = c.value("trace_margin", 0.0);
  }
  if (j.contains("seed") && j["seed"].is_number_unsigned()) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}

SceneFile read_scene(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": invalid JSON: " + e.what());
  }
  try {
    return scene_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.message());
  }
}

Json point_json(Point2D p, const std::string& frame) { return Json{{"x", p.x}, {"y", p.y}, {"frame", frame}}; }

Json line_json(const Line2D& l) { return Json{{"a", l.a()}, {"b", l.b()}, {"c", l.c()}}; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::ParseError, "failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rigidview
