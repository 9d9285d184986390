#pragma once

// The pair relaxation of k-way matching and an exact simplex solver for it.
//
// Models are covering LPs: minimise c.x subject to sum_j a_ij x_j >= b_i and
// x >= 0. The solver works on a dense dictionary over Rationals, runs the
// auxiliary-variable phase 1, and uses Bland's rule in both phases.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kmpmd/instance.hpp"
#include "kmpmd/rational.hpp"

namespace kmpmd {

struct LPConstraint {
  std::vector<std::pair<std::size_t, Rational>> terms;  // (variable, coefficient)
  Rational rhs;
  std::uint64_t subset = 0;  // S for cut constraints, 0 otherwise
};

struct LPModel {
  std::vector<std::pair<RequestId, RequestId>> pairs;  // variable j is the pair pairs[j]
  std::vector<Rational> objective;
  std::vector<LPConstraint> constraints;
  std::size_t candidate_constraints = 0;
  std::size_t pruned_constraints = 0;
  std::vector<std::string> provenance;

  std::size_t variables() const { return objective.size(); }
};

// One variable per unordered pair with cost opt-cost(e) / (gamma k^2), one
// constraint per S with 0 < |S| < m and sur(S) != 0. Throws GuardExceeded when
// m > guard.
LPModel build_p_prime(const Instance& instance, std::size_t guard = 12);

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus status);

struct LPSolution {
  LPStatus status = LPStatus::optimal;
  Rational value;
  std::vector<Rational> x;
  Rational phase1_value;  // optimum of the auxiliary problem, 0 iff feasible
  std::size_t pivots = 0;
};

LPSolution simplex_solve(const LPModel& model);

// Objective of x; no feasibility check.
Rational lp_objective(const LPModel& model, const std::vector<Rational>& x);

// True when x >= 0 and every constraint holds.
bool lp_feasible(const LPModel& model, const std::vector<Rational>& x);

// 0/1 vector with x_e = 1 for pairs inside a common block.
std::vector<Rational> pair_indicator(const LPModel& model,
                                     const std::vector<std::vector<RequestId>>& partition);

struct DualityChain {
  Rational dual;    // D' achieved by the engine
  Rational primal;  // P' from the simplex
  Rational opt;     // brute-force optimum
  bool dual_le_primal = false;
  bool primal_le_opt = false;
  bool holds() const { return dual_le_primal && primal_le_opt; }
};

DualityChain verify_duality_chain(const Rational& dual, const Rational& primal, const Rational& opt);

// Text dump of a model or solution for debugging.
std::string dump_model(const LPModel& model);
std::string dump_solution(const LPModel& model, const LPSolution& solution);

}  // namespace kmpmd
