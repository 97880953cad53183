#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "rigidview/frame.hpp"
#include "rigidview/geometry.hpp"
#include "rigidview/scene_oracle.hpp"

namespace rigidview {

using Json = nlohmann::ordered_json;

/// {"frame_id": ..., "points": [{"label", "x", "y"}, ...]} or CSV with the
/// header label,x,y. Throws ParseError naming the offending entry.
LabeledFrame parse_frame_json(const std::string& text);
LabeledFrame parse_frame_csv(const std::string& text, const std::string& frame_id = "");
/// CSV when the path ends in .csv, JSON otherwise. Throws ParseError,
/// including for unreadable files.
LabeledFrame read_frame(const std::string& path);

Json frame_to_json(const LabeledFrame& frame);
std::string frame_to_csv(const LabeledFrame& frame);

/// A simulated scene with the two cameras that observed it.
struct SceneFile {
  RigidScene scene;
  CameraModel cam1;
  CameraModel cam2;
  std::optional<std::uint64_t> seed;
};

Json scene_to_json(const SceneFile& s);
SceneFile scene_from_json(const Json& j);
SceneFile read_scene(const std::string& path);

/// Point tagged with the coordinate frame it is expressed in.
Json point_json(Point2D p, const std::string& frame = "original");
Json line_json(const Line2D& l);

/// Writes text to path, throwing ParseError when the file cannot be opened.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace rigidview
