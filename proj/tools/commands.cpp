#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <random>
#include <sstream>

#include "rigidview/correspondence_matcher.hpp"
#include "rigidview/dof_ledger.hpp"
#include "rigidview/epipolar_predictor.hpp"
#include "rigidview/error.hpp"
#include "rigidview/focal_locator.hpp"
#include "rigidview/scene_oracle.hpp"

namespace rigidview::cli {

namespace {

Json envelope(const std::string& command, Json inputs) {
  return Json{{"command", command},
              {"inputs", std::move(inputs)},
              {"result", Json::object()},
              {"diagnostics", Json::object()}};
}

Json candidate_json(const RootCandidate& c, const AffineMap2D& to_canonical) {
  Json j{{"u", c.u}, {"v", c.v}, {"valid", c.valid}, {"tangent", c.tangent}};
  if (c.valid) {
    j["f1pp"] = point_json(c.f1pp);
    j["f1pp_canonical"] = point_json(to_canonical.apply(c.f1pp), "canonical");
    j["concurrency_residual"] = c.concurrency_residual;
    j["extra_point_residual"] = c.extra_point_residual;
  } else {
    j["rejection"] = c.rejection;
  }
  return j;
}

FocalOptions focal_options(const std::string& search, double gate) {
  FocalOptions o;
  if (search == "scan") {
    o.search = RootSearch::Scan;
  } else if (search == "isolation") {
    o.search = RootSearch::Isolation;
  } else {
    throw Error(ErrorKind::InvalidArgument, "--search must be scan or isolation");
  }
  o.residual_rel_gate = gate;
  return o;
}

std::vector<Point2D> points_of(const LabeledFrame& f) {
  std::vector<Point2D> out;
  for (const auto& label : f.labels()) out.push_back(f.at(label));
  return out;
}

// Flattens nested objects/arrays to (path, scalar) pairs.
void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

bool is_flat_table(const Json& t) {
  if (!t.is_array() || t.empty()) return false;
  for (const Json& row : t) {
    if (!row.is_object()) return false;
    for (auto it = row.begin(); it != row.end(); ++it)
      if (it.value().is_structured()) return false;
  }
  return true;
}

std::string cell_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("RIGIDVIEW_SEED");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error(ErrorKind::InvalidArgument, std::string("RIGIDVIEW_SEED is not an integer: ") + env);
  return v;
}

Json cmd_locate_focal(const LocateArgs& a) {
  const LabeledFrame f1 = read_frame(a.frame1);
  const LabeledFrame f2 = read_frame(a.frame2);
  FocalOptions o = focal_options(a.search, a.gate);
  o.scan.lo = a.scan_lo;
  o.scan.hi = a.scan_hi;
  o.scan.step = a.scan_step;
  Json report = envelope("locate-focal", {{"frame1", a.frame1},
                                          {"frame2", a.frame2},
                                          {"search", a.search},
                                          {"scan", {{"lo", a.scan_lo}, {"hi", a.scan_hi}, {"step", a.scan_step}}},
                                          {"residual_rel_gate", a.gate}});
  const FocalAnalysis an = analyze_focal(f1, f2, o);

  Json roots = Json::array();
  for (const RootCandidate& c : an.candidates) roots.push_back(candidate_json(c, an.to_canonical));
  report["diagnostics"]["roots"] = roots;
  report["diagnostics"]["isolation_fallback"] = an.used_isolation_fallback;
  report["diagnostics"]["quotients"] = {{"cp", an.quotients.cp}, {"cq", an.quotients.cq}, {"ep", an.quotients.ep},
                                        {"eq", an.quotients.eq}, {"gp", an.quotients.gp}, {"gq", an.quotients.gq}};
  if (a.scan_table) {
    // Scaled so the largest |value| in the table is 1; the polynomial's
    // overall scale carries no meaning.
    Json table = Json::array();
    std::vector<std::pair<double, double>> rows;
    double biggest = 0.0;
    const int n = static_cast<int>(std::floor((a.table_hi - a.table_lo) / a.table_step + 0.5));
    if (n < 0 || !(a.table_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "bad scan-table range");
    for (int i = 0; i <= n; ++i) {
      // Rounded to 12 digits so the grid prints as typed (1.39, not 1.3900000000000001).
      std::ostringstream grid;
      grid << std::setprecision(12) << a.table_lo + a.table_step * i;
      const double u = std::stod(grid.str());
      const double value = an.elimination.final_at_u(u);
      rows.emplace_back(u, value);
      biggest = std::max(biggest, std::abs(value));
    }
    for (const auto& [u, value] : rows) {
      const double scaled = biggest > 0.0 ? value / biggest : 0.0;
      table.push_back({{"u", u}, {"value", scaled}, {"sign", scaled > 0.0 ? "+" : scaled < 0.0 ? "-" : "0"}});
    }
    report["result"]["table"] = table;
  }

  const FocalSolution sol = to_solution(an);
  Json& r = report["result"];
  r["u"] = sol.u_root;
  r["v"] = sol.v_root;
  r["f1pp"] = point_json(sol.f1pp);
  r["f1pp_canonical"] = point_json(an.to_canonical.apply(sol.f1pp), "canonical");
  r["b"] = point_json(sol.b);
  r["d"] = point_json(sol.d);
  r["f"] = point_json(sol.f);
  r["h"] = point_json(sol.h);
  report["diagnostics"]["residuals"] = {{"concurrency", sol.concurrency_residual}};
  return report;
}

Json cmd_predict_line(const PredictArgs& a) {
  const LabeledFrame f1 = read_frame(a.frame1);
  const LabeledFrame f2 = read_frame(a.frame2);
  Json report = envelope("predict-line", {{"frame1", a.frame1}, {"frame2", a.frame2}, {"label", a.label}});
  const FocalSolution sol = locate_projected_focal(f1, f2, focal_options("scan", a.gate));
  const PredictedLine line = predict_line(f1.at(a.label), f1, f2, sol);
  Json& r = report["result"];
  r["line"] = line_json(line.line);
  r["anchor"] = point_json(line.anchor);
  r["via"] = point_json(line.via);
  r["basis"] = std::string(1, line.basis);
  report["diagnostics"]["residuals"] = {{"concurrency", sol.concurrency_residual}};
  if (const auto z2 = f2.find(a.label)) report["diagnostics"]["residuals"]["observed"] = line_residual(*z2, line);
  return report;
}

Json cmd_match(const MatchArgs& a) {
  const LabeledFrame f1 = read_frame(a.s1);
  const LabeledFrame f2 = read_frame(a.s2);
  MatchOptions o;
  o.budget = a.budget;
  o.threads = a.threads;
  o.focal.residual_rel_gate = a.gate;
  Json report = envelope("match", {{"s1", a.s1}, {"s2", a.s2}, {"budget", a.budget}, {"threads", a.threads}});
  const MatchResult m = match_identities(points_of(f1), points_of(f2), o);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < m.assignment.size(); ++i) {
    pairs.push_back({{"s1", f1.labels()[i]}, {"s2", f2.labels()[m.assignment[i]]}});
  }
  Json& r = report["result"];
  r["assignment"] = pairs;
  r["badness"] = m.badness;
  if (!m.runner_up.empty()) r["runner_up_badness"] = m.runner_up_badness;
  Json& d = report["diagnostics"];
  d["evaluated"] = m.evaluated;
  d["combinatorial_count"] = m.diagnostics.combinatorial_count;
  d["basis_selections"] = m.diagnostics.basis_selections;
  d["failed_solves"] = m.diagnostics.failed_solves;
  d["pruned"] = m.diagnostics.pruned;
  return report;
}

Json cmd_dof(const DofArgs& a) {
  Json inputs = Json::object();
  if (a.regime) inputs["regime"] = *a.regime;
  if (a.points) inputs["points"] = *a.points;
  if (a.frames) inputs["frames"] = *a.frames;
  inputs["table"] = a.table;
  Json report = envelope("dof", inputs);
  Json& r = report["result"];
  if (a.table) {
    Json table = Json::array();
    for (const BalanceRow& row : published_balance_table()) {
      table.push_back({{"claim", row.claim},
                       {"regime", to_string(row.scenario.regime)},
                       {"p", row.scenario.p},
                       {"k", row.scenario.k},
                       {"dof", row.verdict.dof},
                       {"info", row.verdict.info},
                       {"margin", row.verdict.margin},
                       {"balanced", row.verdict.balanced},
                       {"reproduced", row.reproduced}});
    }
    r["table"] = table;
    return report;
  }
  if (!a.regime) throw Error(ErrorKind::InvalidArgument, "dof needs --regime (or --table)");
  const Regime regime = parse_regime(*a.regime);
  auto never_or = [](std::optional<int> v) { return v ? Json(*v) : Json("never"); };
  if (a.points && a.frames) {
    const DofScenario s{regime, *a.points, *a.frames};
    const DofVerdict v = verdict(s);
    r["dof"] = v.dof;
    r["info"] = v.info;
    r["margin"] = v.margin;
    r["balanced"] = v.balanced;
    r["redundancy_caveat"] = v.redundancy_caveat;
  } else if (a.frames) {
    r["min_points"] = never_or(min_points(regime, *a.frames));
  } else if (a.points) {
    r["min_frames"] = never_or(min_frames(regime, *a.points));
  } else {
    throw Error(ErrorKind::InvalidArgument, "dof needs --points and/or --frames");
  }
  return report;
}

Json cmd_simulate(const SimulateArgs& a) {
  const std::uint64_t seed = a.seed ? *a.seed : default_seed(1);
  if (!(a.noise >= 0.0) || !std::isfinite(a.noise)) throw Error(ErrorKind::InvalidArgument, "--noise must be >= 0");
  const SceneSample s = random_rigid_scene(a.points, seed);
  LabeledFrame f1 = project(s.scene, s.cam1, "1");
  LabeledFrame f2 = project(s.scene, s.cam2, "2");
  if (a.noise > 0.0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, a.noise);
    for (LabeledFrame* f : {&f1, &f2}) {
      LabeledFrame noisy(f->frame_id());
      for (const auto& label : f->labels()) {
        const Point2D p = f->at(label);
        const double dx = gauss(rng);
        const double dy = gauss(rng);
        noisy.add(label, {p.x + dx, p.y + dy});
      }
      *f = std::move(noisy);
    }
  }
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  const std::string scene_path = (dir / (a.prefix + "_scene.json")).string();
  const std::string f1_path = (dir / (a.prefix + "_frame1.json")).string();
  const std::string f2_path = (dir / (a.prefix + "_frame2.json")).string();
  write_text(scene_path, scene_to_json({s.scene, s.cam1, s.cam2, seed}).dump(2) + "\n");
  write_text(f1_path, frame_to_json(f1).dump(2) + "\n");
  write_text(f2_path, frame_to_json(f2).dump(2) + "\n");

  Json report = envelope("simulate", {{"points", a.points}, {"seed", seed}, {"noise", a.noise}});
  report["result"] = {{"scene", scene_path}, {"frame1", f1_path}, {"frame2", f2_path},
                      {"true_f1pp", point_json(true_projected_focal(s.cam1, s.cam2))}};
  report["diagnostics"] = {{"attempts", s.attempts}, {"certificate_margin", s.scene.certificate.margin()}};
  return report;
}

Json cmd_ambiguity(const AmbiguityArgs& a) {
  const SceneFile sf = read_scene(a.scene);
  MovedFocal moved = MovedFocal::First;
  if (a.move == "second") {
    moved = MovedFocal::Second;
  } else if (a.move != "first") {
    throw Error(ErrorKind::InvalidArgument, "--move must be first or second");
  }
  const AmbiguityResult res = ambiguity_family(sf.scene, sf.cam1, sf.cam2, a.t, moved);
  const LabeledFrame f1 = project(sf.scene, sf.cam1, "1");
  const LabeledFrame f2 = project(sf.scene, sf.cam2, "2");
  const double r1 = reprojection_residual(res.scene, res.cam1, f1);
  const double r2 = reprojection_residual(res.scene, res.cam2, f2);
  const double divergence = signature_divergence(shape_signature(sf.scene), shape_signature(res.scene));

  Json report = envelope("ambiguity", {{"scene", a.scene}, {"t", a.t}, {"move", a.move}});
  SceneFile out{res.scene, res.cam1, res.cam2, std::nullopt};
  report["result"] = {{"scene", scene_to_json(out)}, {"signature_divergence", divergence}};
  report["diagnostics"] = {{"residuals", {{"frame1", r1}, {"frame2", r2}, {"max_ray_gap", res.max_ray_gap}}}};
  return report;
}

std::string render(const Json& report, Format f) {
  if (f == Format::Json) return report.dump(2) + "\n";
  std::ostringstream out;
  const Json* table = nullptr;
  if (report.contains("result") && report["result"].contains("table") && is_flat_table(report["result"]["table"])) {
    table = &report["result"]["table"];
  }
  std::vector<std::pair<std::string, std::string>> flat;
  Json rest = report;
  if (table) rest["result"].erase("table");
  flatten(rest, "", flat);

  if (f == Format::Csv) {
    if (table) {
      bool first = true;
      for (auto it = (*table)[0].begin(); it != (*table)[0].end(); ++it) {
        out << (first ? "" : ",") << csv_cell(it.key());
        first = false;
      }
      out << "\n";
      for (const Json& row : *table) {
        first = true;
        for (auto it = row.begin(); it != row.end(); ++it) {
          out << (first ? "" : ",") << csv_cell(cell_text(it.value()));
          first = false;
        }
        out << "\n";
      }
      return out.str();
    }
    out << "key,value\n";
    for (const auto& [k, v] : flat) out << csv_cell(k) << "," << csv_cell(v) << "\n";
    return out.str();
  }

  for (const auto& [k, v] : flat) out << k << " = " << v << "\n";
  if (table) {
    std::vector<std::string> keys;
    for (auto it = (*table)[0].begin(); it != (*table)[0].end(); ++it) keys.push_back(it.key());
    std::vector<std::size_t> width(keys.size());
    for (std::size_t c = 0; c < keys.size(); ++c) {
      width[c] = keys[c].size();
      for (const Json& row : *table) width[c] = std::max(width[c], cell_text(row[keys[c]]).size());
    }
    for (std::size_t c = 0; c < keys.size(); ++c) out << std::left << std::setw(static_cast<int>(width[c]) + 2) << keys[c];
    out << "\n";
    for (const Json& row : *table) {
      for (std::size_t c = 0; c < keys.size(); ++c)
        out << std::left << std::setw(static_cast<int>(width[c]) + 2) << cell_text(row[keys[c]]);
      out << "\n";
    }
  }
  return out.str();
}

int exit_code(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 2;
  switch (err->kind()) {
    case ErrorKind::ParseError:
    case ErrorKind::MissingLabel:
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::NoValidRoot:
    case ErrorKind::NoRootInInterval:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::NoValidAssignment:
    case ErrorKind::GenerationFailed:
      return 4;
    default:
      return 3;
  }
}

}  // namespace rigidview::cli
