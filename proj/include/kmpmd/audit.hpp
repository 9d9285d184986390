#pragma once

// Post-hoc audits of a GD-k run. Each audit recomputes its quantities from the
// recorded set history and snapshots rather than trusting engine state.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kmpmd/engine.hpp"
#include "kmpmd/instance.hpp"

namespace kmpmd {

struct AuditReport {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  std::optional<Rational> worst_slack;  // smallest observed margin, when meaningful
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
  void fail(std::string message);
};

// At every snapshot and for every arrived pair, r * load(e) <= opt-cost(e) / (gamma k^2)
// where load(e) sums g_S over recorded sets separating the pair.
// Requires a full trace (std::invalid_argument otherwise).
AuditReport audit_dual_feasibility(const RunResult& result, const Instance& instance);

// Phi(u) = tau - atime(u) while u is unmatched, Phi(u) <= tau - atime(u) after.
// Also checks the engine's Phi against the set-history sum. Requires a full trace.
AuditReport audit_potential_identity(const RunResult& result, const Instance& instance);

// Marked edges inside each recorded set form a spanning tree of it, and tree
// paths between members of a group cross the boundary of any earlier set at
// most twice.
AuditReport audit_spanning_forest(const RunResult& result);

// Waiting cost equals sum_S sur(S) g_S; the reported dual objective matches the
// set history; ALG <= (4mk + k^2) gamma D'; on line and dmax spaces also
// ALG <= (4m + k^2) D'. Requires the default rate (std::invalid_argument otherwise).
AuditReport audit_cost_accounting(const RunResult& result, const Instance& instance);

// Groups partition all requests, have k members each, and were all arrived by
// their match time; the per-group costs add up.
AuditReport audit_matching(const RunResult& result, const Instance& instance);

}  // namespace kmpmd
