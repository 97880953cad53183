#include "rigidview/dof_ledger.hpp"

#include <algorithm>
#include <cctype>

#include "rigidview/error.hpp"

namespace rigidview {

namespace {

// dof = -1 + 3p + focal + per_frame * (k - 1)
struct Constants {
  int focal;
  int per_frame;
};

Constants constants(Regime r) {
  switch (r) {
    case Regime::Orthogonal: return {0, 5};
    case Regime::PerspectiveUnknownVarying: return {3, 9};
    case Regime::PerspectiveKnown: return {0, 6};
    case Regime::PerspectiveUnknownFixed: return {3, 6};
    case Regime::PerspectiveAutofocus: return {1, 7};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown regime");
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Orthogonal: return "Orthogonal";
    case Regime::PerspectiveUnknownVarying: return "PerspectiveUnknownVarying";
    case Regime::PerspectiveKnown: return "PerspectiveKnown";
    case Regime::PerspectiveUnknownFixed: return "PerspectiveUnknownFixed";
    case Regime::PerspectiveAutofocus: return "PerspectiveAutofocus";
  }
  return "?";
}

Regime parse_regime(const std::string& name) {
  const std::string n = lower(name);
  for (Regime r : all_regimes()) {
    if (n == lower(to_string(r))) return r;
  }
  if (n == "orthogonal" || n == "ortho") return Regime::Orthogonal;
  if (n == "puv" || n == "unknown-varying") return Regime::PerspectiveUnknownVarying;
  if (n == "known") return Regime::PerspectiveKnown;
  if (n == "puf" || n == "unknown-fixed") return Regime::PerspectiveUnknownFixed;
  if (n == "autofocus") return Regime::PerspectiveAutofocus;
  throw Error(ErrorKind::InvalidArgument, "unknown regime '" + name + "'");
}

const std::vector<Regime>& all_regimes() {
  static const std::vector<Regime> all{Regime::Orthogonal, Regime::PerspectiveUnknownVarying, Regime::PerspectiveKnown,
                                       Regime::PerspectiveUnknownFixed, Regime::PerspectiveAutofocus};
  return all;
}

void DofScenario::validate() const {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be at least 1");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
}

long long degrees_of_freedom(const DofScenario& s) {
  s.validate();
  const Constants c = constants(s.regime);
  return -1LL + 3LL * s.p + c.focal + static_cast<long long>(c.per_frame) * (s.k - 1);
}

long long information(const DofScenario& s) {
  s.validate();
  return 2LL * s.k * s.p;
}

DofVerdict verdict(const DofScenario& s) {
  DofVerdict v;
  v.dof = degrees_of_freedom(s);
  v.info = information(s);
  v.margin = v.info - v.dof;
  v.balanced = v.margin >= 0;
  v.redundancy_caveat =
      s.k == 2 && (s.regime == Regime::PerspectiveUnknownVarying || s.regime == Regime::PerspectiveUnknownFixed);
  return v;
}

// The margin is affine in p (slope 2k - 3) and in k (slope 2p - per_frame):
// with a positive slope the first balanced value is found by walking up, with
// a non-positive one only the smallest value can balance.
std::optional<int> min_points(Regime regime, int k) {
  DofScenario s{regime, 1, k};
  s.validate();
  if (verdict(s).balanced) return 1;
  if (2 * k - 3 <= 0) return std::nullopt;
  while (!verdict(s).balanced) ++s.p;
  return s.p;
}

std::optional<int> min_frames(Regime regime, int p) {
  DofScenario s{regime, p, 1};
  s.validate();
  if (verdict(s).balanced) return 1;
  if (2 * p - constants(regime).per_frame <= 0) return std::nullopt;
  while (!verdict(s).balanced) ++s.k;
  return s.k;
}

std::vector<BalanceRow> published_balance_table() {
  std::vector<BalanceRow> rows;
  auto row = [&](std::string claim, Regime r, int p, int k, long long dof, long long info) {
    BalanceRow b;
    b.claim = std::move(claim);
    b.scenario = {r, p, k};
    b.verdict = verdict(b.scenario);
    b.reproduced = b.verdict.dof == dof && b.verdict.info == info;
    rows.push_back(std::move(b));
  };
  const Regime puv = Regime::PerspectiveUnknownVarying;
  row("41 > 40", puv, 10, 2, 41, 40);
  row("44 = 44", puv, 11, 2, 44, 44);
  row("32 > 28", puv, 7, 2, 32, 28);
  row("41 < 42", puv, 7, 3, 41, 42);
  row("38 > 36", puv, 6, 3, 38, 36);
  row("47 < 48", puv, 6, 4, 47, 48);
  row("80 = 80", puv, 5, 8, 80, 80);
  row("20 = 20", Regime::PerspectiveKnown, 5, 2, 20, 20);

  auto threshold = [&](std::string claim, Regime r, int p_min) {
    BalanceRow b;
    b.claim = std::move(claim);
    b.scenario = {r, p_min, 2};
    b.verdict = verdict(b.scenario);
    b.reproduced = min_points(r, 2) == p_min;
    rows.push_back(std::move(b));
  };
  threshold("p >= 8", Regime::PerspectiveUnknownFixed, 8);
  threshold("p >= 7", Regime::PerspectiveAutofocus, 7);

  // The printed form 9k+2 omits the +3 focal term; either way it outgrows 8k.
  BalanceRow four;
  four.claim = "9k+2 > 8k";
  four.scenario = {puv, 4, 2};
  four.verdict = verdict(four.scenario);
  four.reproduced = !min_frames(puv, 4).has_value();
  for (int k = 1; k <= 1000 && four.reproduced; ++k) {
    const DofVerdict v = verdict({puv, 4, k});
    four.reproduced = 9LL * k + 2 > 8LL * k && v.dof > v.info;
  }
  rows.push_back(std::move(four));
  return rows;
}

}  // namespace rigidview
