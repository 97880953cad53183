#include "rigidview/correspondence_matcher.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include "rigidview/dq_transfer.hpp"
#include "rigidview/epipolar_predictor.hpp"
#include "rigidview/error.hpp"

namespace rigidview {

namespace {

constexpr std::size_t kBasis = 7;

void check_sets(const std::vector<Point2D>& s1, const std::vector<Point2D>& s2) {
  if (s1.size() != s2.size()) throw Error(ErrorKind::InvalidArgument, "point sets differ in size");
  if (s1.size() < kBasis + 1) throw Error(ErrorKind::InvalidArgument, "matching needs at least 8 points per frame");
  for (const auto* s : {&s1, &s2})
    for (const Point2D& p : *s)
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorKind::InvalidArgument, "non-finite point");
}

// Frame-1 data that does not depend on the frame-2 selection.
struct Prepared {
  FrameQuotients quotients;
  std::vector<Frame1Coordinates> extra;  // s1[7..]
};

Prepared prepare(const std::vector<Point2D>& s1) {
  LabeledFrame f1("1");
  for (std::size_t i = 0; i < kBasis; ++i) f1.add(basis_labels()[i], s1[i]);
  Prepared out;
  out.quotients = frame1_quotients(f1);
  for (std::size_t i = kBasis; i < s1.size(); ++i) out.extra.push_back(frame1_coordinates(s1[i], f1));
  return out;
}

// Residual rows, one per valid candidate: cost[c][i][j] is the residual of
// s2[rem[j]] against the line predicted for s1[7 + i].
using CostTable = std::vector<std::vector<std::vector<double>>>;

// Empty when no candidate is valid or every valid one fails to predict.
CostTable cost_table(const Prepared& prep, const std::array<Point2D, 7>& basis, const std::vector<Point2D>& s2,
                     const std::vector<std::size_t>& rem, const FocalOptions& options) {
  FocalAnalysis an;
  try {
    an = analyze_focal_basis(prep.quotients, basis, options);
  } catch (const Error&) {
    return {};
  }
  const Frame2Plane plane{basis[1], basis[2], basis[0]};
  CostTable table;
  for (const RootCandidate& cand : an.candidates) {
    if (!cand.valid) continue;
    std::vector<std::vector<double>> rows;
    rows.reserve(prep.extra.size());
    bool ok = true;
    for (const Frame1Coordinates& coords : prep.extra) {
      const auto line = try_predict_from_coordinates(coords, plane, cand.f1pp, cand.b, cand.d);
      if (!line) {
        ok = false;
        break;
      }
      std::vector<double> row(rem.size());
      for (std::size_t j = 0; j < rem.size(); ++j) row[j] = line_residual(s2[rem[j]], *line);
      rows.push_back(std::move(row));
    }
    if (ok) table.push_back(std::move(rows));
  }
  return table;
}

struct Scored {
  double badness = kFailedBadness;
  std::vector<std::size_t> assignment;
};

bool better(const Scored& a, const Scored& b) {
  return a.badness < b.badness || (a.badness == b.badness && a.assignment < b.assignment);
}

// Best two distinct assignments seen so far.
struct Top2 {
  std::optional<Scored> best;
  std::optional<Scored> second;

  double threshold() const { return second ? second->badness : kFailedBadness; }

  void offer(Scored s) {
    if (best && s.assignment == best->assignment) {
      if (better(s, *best)) best = std::move(s);
      return;
    }
    if (second && s.assignment == second->assignment) {
      if (!better(s, *second)) return;
      second.reset();
    }
    if (!best || better(s, *best)) {
      second = std::move(best);
      best = std::move(s);
    } else if (!second || better(s, *second)) {
      second = std::move(s);
    }
  }
};

struct ChunkResult {
  Top2 top;
  std::uint64_t evaluated = 0;
  std::uint64_t selections = 0;
  std::uint64_t failed = 0;
  std::uint64_t pruned = 0;
};

class ChunkSearch {
 public:
  ChunkSearch(const Prepared& prep, const std::vector<Point2D>& s2, const MatchOptions& options, ChunkResult& out)
      : prep_(prep), s2_(s2), options_(options), out_(out), n_(s2.size()), used_(n_, false) {}

  void run(std::size_t first) {
    sel_[0] = first;
    used_[first] = true;
    select(1);
  }

 private:
  void select(std::size_t depth) {
    if (depth == kBasis) {
      score_selection();
      return;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (used_[j]) continue;
      used_[j] = true;
      sel_[depth] = j;
      select(depth + 1);
      used_[j] = false;
    }
  }

  void score_selection() {
    ++out_.selections;
    ++out_.evaluated;
    std::array<Point2D, 7> basis;
    for (std::size_t k = 0; k < kBasis; ++k) basis[k] = s2_[sel_[k]];
    rem_.clear();
    for (std::size_t j = 0; j < n_; ++j)
      if (!used_[j]) rem_.push_back(j);
    table_ = cost_table(prep_, basis, s2_, rem_, options_.focal);
    if (table_.empty()) {
      ++out_.failed;
      return;
    }
    --out_.evaluated;  // counted per completed assignment below
    const std::size_t m = rem_.size();
    if (m <= options_.exact_remaining_limit) {
      perm_.assign(m, 0);
      taken_.assign(m, false);
      partial_.assign(table_.size(), 0.0);
      permute(0);
    } else {
      greedy();
    }
  }

  Scored make(const std::vector<std::size_t>& rem_choice, double bad) const {
    Scored s;
    s.badness = bad;
    s.assignment.resize(n_);
    for (std::size_t k = 0; k < kBasis; ++k) s.assignment[k] = sel_[k];
    for (std::size_t i = 0; i < rem_choice.size(); ++i) s.assignment[kBasis + i] = rem_[rem_choice[i]];
    return s;
  }

  // Exhaustive pairing of the remaining points, cut once every candidate's
  // partial sum exceeds the chunk's runner-up.
  void permute(std::size_t i) {
    const std::size_t m = rem_.size();
    if (i == m) {
      ++out_.evaluated;
      out_.top.offer(make(perm_, *std::min_element(partial_.begin(), partial_.end())));
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (taken_[j]) continue;
      double lowest = kFailedBadness;
      for (std::size_t c = 0; c < table_.size(); ++c) {
        partial_[c] += table_[c][i][j];
        lowest = std::min(lowest, partial_[c]);
      }
      if (lowest > out_.top.threshold()) {
        ++out_.pruned;
      } else {
        taken_[j] = true;
        perm_[i] = j;
        permute(i + 1);
        taken_[j] = false;
      }
      for (std::size_t c = 0; c < table_.size(); ++c) partial_[c] -= table_[c][i][j];
    }
  }

  // Cheapest pairs first, then pairwise swaps while they lower the sum.
  void greedy() {
    const std::size_t m = rem_.size();
    for (const auto& cost : table_) {
      std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
      pairs.reserve(m * m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) pairs.emplace_back(cost[i][j], i, j);
      std::sort(pairs.begin(), pairs.end());
      std::vector<std::size_t> choice(m, m);
      std::vector<bool> col(m, false);
      for (const auto& [c, i, j] : pairs) {
        if (choice[i] != m || col[j]) continue;
        choice[i] = j;
        col[j] = true;
      }
      for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a + 1; b < m; ++b) {
            const double now = cost[a][choice[a]] + cost[b][choice[b]];
            const double swapped = cost[a][choice[b]] + cost[b][choice[a]];
            if (swapped < now) {
              std::swap(choice[a], choice[b]);
              improved = true;
            }
          }
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += cost[i][choice[i]];
      ++out_.evaluated;
      out_.top.offer(make(choice, sum));
    }
  }

  const Prepared& prep_;
  const std::vector<Point2D>& s2_;
  const MatchOptions& options_;
  ChunkResult& out_;
  std::size_t n_;
  std::vector<bool> used_;
  std::array<std::size_t, kBasis> sel_{};
  std::vector<std::size_t> rem_;
  CostTable table_;
  std::vector<std::size_t> perm_;
  std::vector<bool> taken_;
  std::vector<double> partial_;
};

}  // namespace

std::uint64_t ordered_selections(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t f = n - i;
    if (out > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
    out *= f;
  }
  return out;
}

double badness(const std::vector<std::size_t>& assignment, const std::vector<Point2D>& s1,
               const std::vector<Point2D>& s2, const MatchOptions& options) {
  check_sets(s1, s2);
  const std::size_t n = s1.size();
  if (assignment.size() != n) throw Error(ErrorKind::InvalidArgument, "assignment size differs from the point count");
  std::vector<bool> seen(n, false);
  for (std::size_t j : assignment) {
    if (j >= n || seen[j]) throw Error(ErrorKind::InvalidArgument, "assignment is not a bijection");
    seen[j] = true;
  }
  Prepared prep;
  try {
    prep = prepare(s1);
  } catch (const Error&) {
    return kFailedBadness;
  }
  std::array<Point2D, 7> basis;
  for (std::size_t k = 0; k < kBasis; ++k) basis[k] = s2[assignment[k]];
  std::vector<std::size_t> rem(assignment.begin() + kBasis, assignment.end());
  const CostTable table = cost_table(prep, basis, s2, rem, options.focal);
  double best = kFailedBadness;
  for (const auto& cost : table) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rem.size(); ++i) sum += cost[i][i];
    best = std::min(best, sum);
  }
  return best;
}

MatchResult match_identities(const std::vector<Point2D>& s1, const std::vector<Point2D>& s2,
                             const MatchOptions& options) {
  check_sets(s1, s2);
  if (options.budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be at least 1");
  const std::size_t n = s1.size();
  MatchResult result;
  result.diagnostics.combinatorial_count = ordered_selections(n, kBasis + 1);
  if (result.diagnostics.combinatorial_count > options.budget) {
    std::ostringstream msg;
    msg << "n!/(n-8)! = " << result.diagnostics.combinatorial_count << " ordered selections for n = " << n
        << " exceed the budget of " << options.budget << "; the task may be prohibitive";
    throw Error(ErrorKind::BudgetExceeded, msg.str());
  }

  const Prepared prep = prepare(s1);
  // One chunk per partner of s1[0]; chunks never share pruning state, so
  // the outcome does not depend on the thread count.
  std::vector<ChunkResult> chunks(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n; c = next++) ChunkSearch(prep, s2, options, chunks[c]).run(c);
  };
  const auto threads = static_cast<std::size_t>(std::clamp(options.threads, 1, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Top2 top;
  for (ChunkResult& c : chunks) {
    result.evaluated += c.evaluated;
    result.diagnostics.basis_selections += c.selections;
    result.diagnostics.failed_solves += c.failed;
    result.diagnostics.pruned += c.pruned;
    if (c.top.best) top.offer(std::move(*c.top.best));
    if (c.top.second) top.offer(std::move(*c.top.second));
  }
  if (!top.best) {
    throw Error(ErrorKind::NoValidAssignment, "no basis selection of " + std::to_string(result.diagnostics.basis_selections) +
                                                  " yields a valid focal solution");
  }
  result.assignment = std::move(top.best->assignment);
  result.badness = top.best->badness;
  if (top.second) {
    result.runner_up = std::move(top.second->assignment);
    result.runner_up_badness = top.second->badness;
  }
  return result;
}

MembershipResult rigid_membership(const LabeledFrame& frame1, const LabeledFrame& frame2,
                                  std::pair<Point2D, Point2D> candidate, double tol, const FocalOptions& options) {
  const FocalSolution sol = locate_projected_focal(frame1, frame2, options);
  const PredictedLine line = predict_line(candidate.first, frame1, frame2, sol);
  MembershipResult out;
  out.residual = line_residual(candidate.second, line);
  out.member = out.residual <= tol;
  return out;
}

}  // namespace rigidview
