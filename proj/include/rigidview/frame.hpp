#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rigidview/geometry.hpp"

namespace rigidview {

/// Image positions of labeled points in one frame. Labels are unique; the
/// insertion order is kept so that files round-trip in their original order.
class LabeledFrame {
 public:
  LabeledFrame() = default;
  explicit LabeledFrame(std::string frame_id) : frame_id_(std::move(frame_id)) {}

  const std::string& frame_id() const { return frame_id_; }
  void set_frame_id(std::string id) { frame_id_ = std::move(id); }

  /// Throws InvalidArgument on a duplicate label or non-finite coordinates.
  void add(const std::string& label, Point2D p);
  /// Throws MissingLabel naming the label.
  Point2D at(const std::string& label) const;
  std::optional<Point2D> find(const std::string& label) const;
  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  const std::vector<std::string>& labels() const { return order_; }
  size_t size() const { return order_.size(); }

 private:
  std::string frame_id_;
  std::vector<std::string> order_;
  std::map<std::string, Point2D> index_;
};

/// Labels of the seven points that fix the two-frame geometry.
inline const std::vector<std::string>& basis_labels() {
  static const std::vector<std::string> labels{"R", "P", "Q", "A", "C", "E", "G"};
  return labels;
}

}  // namespace rigidview
