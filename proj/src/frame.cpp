#include "rigidview/frame.hpp"

#include <cmath>

#include "rigidview/error.hpp"

namespace rigidview {

void LabeledFrame::add(const std::string& label, Point2D p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw Error(ErrorKind::InvalidArgument, "non-finite coordinates for label '" + label + "'");
  }
  if (!index_.emplace(label, p).second) {
    throw Error(ErrorKind::InvalidArgument, "duplicate label '" + label + "'");
  }
  order_.push_back(label);
}

Point2D LabeledFrame::at(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) {
    throw Error(ErrorKind::MissingLabel,
                "label '" + label + "' not present in frame '" + frame_id_ + "'");
  }
  return it->second;
}

std::optional<Point2D> LabeledFrame::find(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace rigidview
