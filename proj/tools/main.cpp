#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "commands.hpp"
#include "rigidview/error.hpp"

using namespace rigidview::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-view rigid-body geometry from point projections"};
  app.require_subcommand(1);
  app.fallthrough();  // --format may follow the subcommand
  Format format = Format::Json;
  const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}, {"text", Format::Text}};
  app.add_option("--format", format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("json");

  LocateArgs locate;
  auto* c_locate = app.add_subcommand("locate-focal", "Image of frame 1's focal point in frame 2");
  c_locate->add_option("frame1", locate.frame1, "Frame 1 file (JSON or CSV)")->required();
  c_locate->add_option("frame2", locate.frame2, "Frame 2 file (JSON or CSV)")->required();
  c_locate->add_flag("--scan-table", locate.scan_table, "Tabulate the final polynomial");
  c_locate->add_option("--table-lo", locate.table_lo)->capture_default_str();
  c_locate->add_option("--table-hi", locate.table_hi)->capture_default_str();
  c_locate->add_option("--table-step", locate.table_step)->capture_default_str();
  c_locate->add_option("--scan-lo", locate.scan_lo)->capture_default_str();
  c_locate->add_option("--scan-hi", locate.scan_hi)->capture_default_str();
  c_locate->add_option("--scan-step", locate.scan_step)->capture_default_str();
  c_locate->add_option("--search", locate.search, "scan or isolation")->capture_default_str();
  c_locate->add_option("--gate", locate.gate, "Concurrency residual gate, relative to frame extent")
      ->capture_default_str();

  PredictArgs predict;
  auto* c_predict = app.add_subcommand("predict-line", "Line z'' in frame 2 for a further labeled point");
  c_predict->add_option("frame1", predict.frame1)->required();
  c_predict->add_option("frame2", predict.frame2)->required();
  c_predict->add_option("--label,-z", predict.label, "Label of the point in frame 1")->required();
  c_predict->add_option("--gate", predict.gate)->capture_default_str();

  MatchArgs match;
  auto* c_match = app.add_subcommand("match", "Recover point identities between two unlabeled frames");
  c_match->add_option("s1", match.s1, "Frame 1; its first seven points form the basis")->required();
  c_match->add_option("s2", match.s2)->required();
  c_match->add_option("--budget", match.budget, "Ceiling on n!/(n-8)!")->capture_default_str();
  c_match->add_option("--threads", match.threads)->capture_default_str()->check(CLI::PositiveNumber);
  c_match->add_option("--gate", match.gate)->capture_default_str();

  DofArgs dof;
  auto* c_dof = app.add_subcommand("dof", "Degrees of freedom against information");
  c_dof->add_option("--regime", dof.regime, "orthogonal, puv, known, puf or autofocus");
  c_dof->add_option("--points,-p", dof.points)->check(CLI::PositiveNumber);
  c_dof->add_option("--frames,-k", dof.frames)->check(CLI::PositiveNumber);
  c_dof->add_flag("--table", dof.table, "Recompute the reference balance table");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Write a certified random scene and its two frames");
  c_sim->add_option("--points", sim.points)->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Defaults to RIGIDVIEW_SEED, then 1");
  c_sim->add_option("--noise", sim.noise, "Std. deviation of image noise")->capture_default_str();
  c_sim->add_option("--out-dir", sim.out_dir)->capture_default_str();
  c_sim->add_option("--prefix", sim.prefix)->capture_default_str();

  AmbiguityArgs amb;
  auto* c_amb = app.add_subcommand("ambiguity", "Slide a focal point along the baseline");
  c_amb->add_option("--scene", amb.scene)->required();
  c_amb->add_option("--t", amb.t)->capture_default_str();
  c_amb->add_option("--move", amb.move, "first or second")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rigidview::Json report;
    if (*c_locate) report = cmd_locate_focal(locate);
    else if (*c_predict) report = cmd_predict_line(predict);
    else if (*c_match) report = cmd_match(match);
    else if (*c_dof) report = cmd_dof(dof);
    else if (*c_sim) report = cmd_simulate(sim);
    else report = cmd_ambiguity(amb);
    std::cout << render(report, format);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
}
