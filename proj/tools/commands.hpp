#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rigidview/io.hpp"

namespace rigidview::cli {

enum class Format { Json, Csv, Text };

struct LocateArgs {
  std::string frame1, frame2;
  bool scan_table = false;
  double table_lo = 1.33, table_hi = 1.53, table_step = 0.02;
  double scan_lo = -50.0, scan_hi = 50.0, scan_step = 1e-3;
  std::string search = "scan";
  double gate = 1e-6;
};

struct PredictArgs {
  std::string frame1, frame2, label;
  double gate = 1e-6;
};

struct MatchArgs {
  std::string s1, s2;
  std::uint64_t budget = 5'000'000;
  int threads = 1;
  double gate = 1e-6;
};

struct DofArgs {
  std::optional<std::string> regime;
  std::optional<int> points, frames;
  bool table = false;
};

struct SimulateArgs {
  int points = 8;
  std::optional<std::uint64_t> seed;
  double noise = 0.0;
  std::string out_dir = ".";
  std::string prefix = "sim";
};

struct AmbiguityArgs {
  std::string scene;
  double t = 0.3;
  std::string move = "first";
};

/// Each returns the report envelope {command, inputs, result, diagnostics}.
Json cmd_locate_focal(const LocateArgs& a);
Json cmd_predict_line(const PredictArgs& a);
Json cmd_match(const MatchArgs& a);
Json cmd_dof(const DofArgs& a);
Json cmd_simulate(const SimulateArgs& a);
Json cmd_ambiguity(const AmbiguityArgs& a);

/// The report as JSON text, or flattened to csv/text. A "table" array of
/// flat rows under result is rendered as a proper table.
std::string render(const Json& report, Format f);

/// Exit status for a library error kind: 2 input, 3 degenerate geometry,
/// 4 no valid result.
int exit_code(const std::exception& e);

/// RIGIDVIEW_SEED when set and numeric, else fallback.
std::uint64_t default_seed(std::uint64_t fallback);

}  // namespace rigidview::cli
