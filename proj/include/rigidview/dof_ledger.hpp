#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rigidview {

enum class Regime {
  Orthogonal,
  PerspectiveUnknownVarying,
  PerspectiveKnown,
  PerspectiveUnknownFixed,
  PerspectiveAutofocus,
};

std::string to_string(Regime r);
/// Accepts the enum spelling and short forms (orthogonal, puv, known, puf,
/// autofocus), case-insensitive. Throws InvalidArgument.
Regime parse_regime(const std::string& name);
const std::vector<Regime>& all_regimes();

struct DofScenario {
  Regime regime = Regime::PerspectiveUnknownVarying;
  int p = 1;  // traced points
  int k = 1;  // frames

  /// Throws InvalidArgument unless p >= 1 and k >= 1.
  void validate() const;
};

struct DofVerdict {
  long long dof = 0;
  long long info = 0;
  bool balanced = false;
  long long margin = 0;  // info - dof
  /// Counting balance reached but the points beyond seven add no
  /// structure: perspective two-frame cases with an unknown optical system.
  bool redundancy_caveat = false;
};

long long degrees_of_freedom(const DofScenario& s);
long long information(const DofScenario& s);
DofVerdict verdict(const DofScenario& s);

/// Smallest p with a balanced verdict for k frames; empty means never.
std::optional<int> min_points(Regime regime, int k);
/// Smallest k with a balanced verdict for p points; empty means never.
std::optional<int> min_frames(Regime regime, int p);

struct BalanceRow {
  std::string claim;  // e.g. "41 > 40"
  DofScenario scenario;
  DofVerdict verdict;
  bool reproduced = false;
};

/// The published balance (in)equalities, each recomputed.
std::vector<BalanceRow> published_balance_table();

}  // namespace rigidview
