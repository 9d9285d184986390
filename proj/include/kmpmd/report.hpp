#pragma once

// Machine-readable reports: run documents, bench rows, seeded sweeps and the
// adversarial lower-bound report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmpmd/audit.hpp"
#include "kmpmd/engine.hpp"
#include "kmpmd/instance.hpp"
#include "kmpmd/rational.hpp"

namespace kmpmd {

// Fixed-point rendering of an exact value, for the float convenience columns.
std::string decimal(const Rational& value, int digits = 6);

struct BoundCheck {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds = false;  // lhs <= rhs
};

// ALG <= (4mk + k^2) gamma D' always; ALG <= (4m + k^2) D' on line and dmax spaces.
std::vector<BoundCheck> competitive_bounds(const Instance& instance, const RunResult& result);

// Engine audits that apply to the run: the trace-based ones need a full trace,
// cost accounting needs the default rate.
std::vector<AuditReport> engine_audits(const Instance& instance, const RunResult& result);

// JSON document with sections instance, result, audits, bounds.
std::string run_report(const Instance& instance, const RunResult& result,
                       const std::vector<AuditReport>& audits,
                       const std::vector<BoundCheck>& bounds);

struct NamedInstance {
  std::string name;
  Instance instance;
};

// Seeded random instances cycling through line, dmax and dhc spaces with
// k in {2, 3, 4} and m a multiple of k in [k, max_m].
std::vector<NamedInstance> random_sweep(std::size_t count, std::size_t max_m, std::uint64_t seed);

struct BenchRow {
  std::string name;
  std::size_t m = 0;
  int k = 2;
  Rational gamma;
  Rational alg;
  Rational dist;
  Rational wait;
  Rational dual;
  std::optional<Rational> pprime;
  std::optional<Rational> opt;
  bool bounds_ok = false;

  std::optional<Rational> ratio() const;
};

struct BenchOptions {
  bool with_lp = false;
  std::size_t lp_guard = 10;
  bool with_opt = false;
  std::uint64_t opt_guard = 10'000'000;
};

BenchRow bench_row(const NamedInstance& item, const BenchOptions& options);

// Exact columns name,m,k,gamma,alg,dist,wait,dual,pprime,opt,ratio,bounds_ok
// followed by alg_approx,ratio_approx. Empty cells for absent values.
std::string bench_csv_header();
std::string bench_csv_line(const BenchRow& row);

struct LowerBoundReport {
  int k = 2;
  int s = 1;
  Rational epsilon;
  std::size_t m = 0;

  Rational alg;
  Rational alg_claim;        // m + k + (m - k) epsilon
  Rational alg_closed_form;  // 2m(k - 1)/k + k + (m - k) epsilon
  std::vector<Rational> group_times;
  bool schedule_matches = false;  // group i is batch i, at 1 then 1 + (2i - 2) epsilon

  std::optional<Rational> opt;  // brute force, when within the guard
  Rational schedule_value;      // cost of matching equal points batch by batch
  Rational opt_claim;           // k + k epsilon + k^3 epsilon + m k epsilon
  Rational ratio;               // ALG over OPT, or over the schedule value
  Rational ratio_floor;         // (m + k) / (4k)

  bool alg_claim_holds() const { return alg >= alg_claim; }
  bool closed_form_matches() const { return alg == alg_closed_form; }
  bool opt_claim_holds() const { return opt.value_or(schedule_value) <= opt_claim; }
  bool ratio_holds() const { return ratio >= ratio_floor; }
  bool all_hold() const;
};

// Requires epsilon <= 1/max{k^2, m}; throws InputError otherwise.
LowerBoundReport lowerbound_report(int k, int s, const Rational& epsilon,
                                   std::uint64_t opt_guard = 10'000'000);

std::string lowerbound_json(const LowerBoundReport& report);

}  // namespace kmpmd
