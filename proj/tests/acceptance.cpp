// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kmpmd/audit.hpp"
#include "kmpmd/cli.hpp"
#include "kmpmd/engine.hpp"
#include "kmpmd/lp.hpp"
#include "kmpmd/metric.hpp"
#include "kmpmd/offline.hpp"
#include "kmpmd/report.hpp"
#include "oracles.hpp"

using namespace kmpmd;

namespace {

constexpr std::uint64_t sweep_seed = 1;
constexpr std::size_t sweep_size = 200;
constexpr std::size_t sweep_max_m = 20;
constexpr std::size_t chain_size = 100;
constexpr std::size_t chain_max_m = 10;
constexpr std::uint64_t chain_seed = 5001;
constexpr double closed_form_seconds = 1.0;
constexpr double sweep_seconds = 30.0;
constexpr double chain_seconds = 300.0;

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (details.size() < 12) details.push_back(what);
    }
  }
  void note(const std::string& what) { details.push_back(what); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& title, const Outcome& out) {
  std::cout << (out.passed ? "PASS" : "FAIL") << " [" << id << "] " << title << "\n";
  for (const auto& d : out.details) std::cout << "       " << d << "\n";
  if (!out.passed) ++failures;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << x;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome adversarial_closed_forms() {
  Outcome out;
  struct Case {
    int k, s;
    Rational eps;
  };
  for (const auto& c : {Case{2, 1, Rational(1, 100)}, Case{3, 1, Rational(1, 9)}, Case{2, 3, Rational(1, 12)},
                        Case{4, 1, Rational(1, 16)}}) {
    const auto start = Clock::now();
    const auto inst = gen_adversarial_line(c.k, c.s, c.eps);
    const auto r = run(inst, {std::nullopt, TraceLevel::summary});
    const auto opt = brute_force_opt(inst);
    const double took = seconds_since(start);

    const Rational m = inst.m(), k = c.k, eps = c.eps;
    const Rational closed = 2 * m * (k - 1) / k + k + (m - k) * eps;
    const std::string tag = "(k=" + std::to_string(c.k) + ", s=" + std::to_string(c.s) + ", eps=" + eps.str() + ")";
    out.expect(r.total_cost == closed, tag + " ALG = " + r.total_cost.str() + ", closed form " + closed.str());

    bool schedule = r.groups.size() == inst.m() / static_cast<std::size_t>(c.k);
    for (std::size_t i = 0; schedule && i < r.groups.size(); ++i) {
      const Rational expected = i == 0 ? Rational(1) : 1 + Rational(2 * i) * eps;
      schedule = r.groups[i].time == expected && r.groups[i].members.front() == i * static_cast<std::size_t>(c.k);
    }
    out.expect(schedule, tag + " group schedule differs");

    const Rational claim = k + k * eps + k * k * k * eps + m * k * eps;
    out.expect(opt.value <= claim, tag + " OPT = " + opt.value.str() + " > " + claim.str());
    out.expect(took < closed_form_seconds, tag + " took " + fmt(took) + " s");
  }
  return out;
}

Outcome competitive_bounds_sweep(const std::vector<NamedInstance>& sweep, double& elapsed) {
  Outcome out;
  const auto start = Clock::now();
  std::size_t checks = 0;
  for (const auto& item : sweep) {
    const auto r = run(item.instance, {std::nullopt, TraceLevel::summary});
    for (const auto& b : competitive_bounds(item.instance, r)) {
      ++checks;
      out.expect(b.holds, item.name + ": " + b.name + " " + b.lhs.str() + " > " + b.rhs.str());
    }
  }
  elapsed = seconds_since(start);
  out.expect(elapsed < sweep_seconds, "sweep took " + fmt(elapsed) + " s");
  out.note(std::to_string(sweep.size()) + " instances, " + std::to_string(checks) + " bound checks, " +
           fmt(elapsed) + " s");
  return out;
}

Outcome duality_chain() {
  Outcome out;
  const auto start = Clock::now();
  const auto items = random_sweep(chain_size, chain_max_m, chain_seed);
  std::size_t strict_dual = 0, strict_opt = 0;
  for (const auto& item : items) {
    const auto& inst = item.instance;
    const auto dual = run(inst, {std::nullopt, TraceLevel::summary}).dual_objective;
    const auto sol = simplex_solve(build_p_prime(inst, chain_max_m));
    out.expect(sol.status == LPStatus::optimal, item.name + ": simplex " + to_string(sol.status));
    if (sol.status != LPStatus::optimal) continue;
    const auto opt = brute_force_opt(inst).value;
    const auto chain = verify_duality_chain(dual, sol.value, opt);
    out.expect(chain.holds(), item.name + ": D' = " + dual.str() + ", P' = " + sol.value.str() + ", OPT = " + opt.str());
    strict_dual += dual < sol.value ? 1 : 0;
    strict_opt += sol.value < opt ? 1 : 0;
  }
  const double took = seconds_since(start);
  out.expect(took < chain_seconds, "chain took " + fmt(took) + " s");
  out.note(std::to_string(items.size()) + " instances; D' < P' on " + std::to_string(strict_dual) + ", P' < OPT on " +
           std::to_string(strict_opt) + "; " + fmt(took) + " s");
  return out;
}

Outcome lemma_audits(const std::vector<NamedInstance>& sweep) {
  Outcome out;
  std::size_t feasibility_checked = 0;
  for (const auto& item : sweep) {
    const auto& inst = item.instance;
    const auto r = run(inst);
    for (const auto& a : {audit_dual_feasibility(r, inst), audit_potential_identity(r, inst), audit_spanning_forest(r),
                          audit_cost_accounting(r, inst), audit_matching(r, inst)}) {
      out.expect(a.passed(), item.name + ": " + a.name + ": " + (a.passed() ? "" : a.violations.front()));
    }
    if (inst.m() <= 16) {
      Partition p;
      for (const auto& g : r.groups) p.push_back(g.members);
      const auto f = check_p_prime_feasibility(inst, p, 16);
      out.expect(f.feasible, item.name + ": matching violates the cut at subset " + std::to_string(f.witness));
      ++feasibility_checked;
    }
  }
  out.note(std::to_string(sweep.size()) + " runs audited; relaxation feasibility checked on " +
           std::to_string(feasibility_checked));
  return out;
}

Outcome metric_layer(const std::vector<NamedInstance>& sweep) {
  Outcome out;
  std::size_t spaces = 0, tuples = 0;
  std::mt19937_64 rng(77);
  for (auto kind : {MetricKind::line_diameter, MetricKind::dmax_over_base, MetricKind::dhc_over_base}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (int k = 2; k <= 4; ++k) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          const auto space = random_space(kind, n, k, seed * 31 + n);
          const auto axioms = verify_h_axioms(space);
          for (const auto& a : axioms.results) {
            out.expect(a.passed, to_string(kind) + " n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " +
                                     a.axiom + " " + a.detail);
          }
          std::uniform_int_distribution<PointId> point(0, n - 1);
          std::uniform_int_distribution<int> slot(0, k - 1);
          for (int i = 0; i < 1000; ++i) {
            std::vector<PointId> t(static_cast<std::size_t>(k));
            for (auto& p : t) p = point(rng);
            const auto s = verify_sandwich(space, t, t[static_cast<std::size_t>(slot(rng))]);
            out.expect(s.holds, to_string(kind) + ": sandwich fails, value " + s.value.str());
            ++tuples;
          }
          ++spaces;
        }
      }
    }
  }
  std::size_t groups = 0;
  for (const auto& item : sweep) {
    for (const auto& g : run(item.instance, {std::nullopt, TraceLevel::summary}).groups) {
      const auto s = verify_optcost_sandwich(item.instance, g.members);
      out.expect(s.holds, item.name + ": group cost sandwich fails");
      ++groups;
    }
  }

  // Corrupted spaces must be caught with a concrete witness.
  const auto broken_triangle = MetricSpace::unchecked(
      MetricKind::dmax_over_base, BasePairMetric({{0, 10, 1}, {10, 0, 1}, {1, 1, 0}}), 2);
  const auto tri_report = verify_h_axioms(broken_triangle);
  const auto& tri = tri_report.find("Delta_H");
  bool witness = !tri.passed && tri.anchor && tri.split;
  if (witness) {
    const auto k = tri.tuple.size();
    std::vector<PointId> left(k, *tri.anchor), right(k, *tri.anchor);
    for (std::size_t j = 0; j < k; ++j) (j < static_cast<std::size_t>(*tri.split) ? left : right)[j] = tri.tuple[j];
    witness = broken_triangle.k_distance(tri.tuple) > broken_triangle.k_distance(left) + broken_triangle.k_distance(right);
  }
  out.expect(witness, "triangle-violating base produced no valid Delta_H witness");

  const auto asymmetric = MetricSpace::unchecked(
      MetricKind::dmax_over_base, BasePairMetric({{0, 1, 2}, {3, 0, 2}, {2, 2, 0}}), 3);
  const auto asym_report = verify_h_axioms(asymmetric);
  const auto& pi = asym_report.find("Pi");
  out.expect(!pi.passed && asymmetric.k_distance(pi.tuple) != asymmetric.k_distance(pi.other),
             "asymmetric base produced no valid Pi witness");

  const auto degenerate = MetricSpace::unchecked(
      MetricKind::dhc_over_base, BasePairMetric({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}}), 2);
  const auto degenerate_report = verify_h_axioms(degenerate);
  const auto& od = degenerate_report.find("O_D");
  out.expect(!od.passed && degenerate.k_distance(od.tuple).is_zero(), "zero distance produced no valid O_D witness");

  out.note(std::to_string(spaces) + " spaces checked exhaustively, " + std::to_string(tuples) + " sandwich tuples, " +
           std::to_string(groups) + " groups");
  return out;
}

Outcome oracle_cross_checks(const std::vector<NamedInstance>& sweep) {
  Outcome out;
  std::mt19937_64 rng(3);
  std::size_t tuples = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int k = 2; k <= 6; ++k) {
      const auto space = random_space(MetricKind::dhc_over_base, n, k, 900 + n * 10 + static_cast<std::size_t>(k));
      std::uniform_int_distribution<PointId> point(0, n - 1);
      std::uint64_t total = 1;
      for (int i = 0; i < k; ++i) total *= n;
      const bool exhaustive = total <= 4000;
      const std::uint64_t count = exhaustive ? total : 4000;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<PointId> t(static_cast<std::size_t>(k));
        std::uint64_t code = idx;
        for (auto& p : t) {
          if (exhaustive) {
            p = code % n;
            code /= n;
          } else {
            p = point(rng);
          }
        }
        out.expect(space.k_distance(t) == oracle::circuit_by_permutation(space.base().matrix(), t),
                   "d_HC mismatch for n=" + std::to_string(n) + " k=" + std::to_string(k));
        ++tuples;
      }
    }
  }
  std::size_t instances = 0;
  for (const auto& item : sweep) {
    if (item.instance.m() > 8) continue;
    const auto a = brute_force_opt(item.instance).value;
    const auto b = oracle::opt_by_labeling(item.instance);
    out.expect(a == b, item.name + ": brute force " + a.str() + " vs labeling " + b.str());
    ++instances;
  }
  out.note(std::to_string(tuples) + " circuit tuples, " + std::to_string(instances) + " optima compared");
  return out;
}

Outcome bench_determinism() {
  Outcome out;
  const std::vector<std::string> args{"bench", "--kind", "sweep", "--count", std::to_string(sweep_size),
                                      "--max-m", std::to_string(sweep_max_m), "--seed", std::to_string(sweep_seed),
                                      "--opt", "--opt-guard", "1000000"};
  std::ostringstream a, b, err;
  const int ca = cli_main(args, a, err);
  const int cb = cli_main(args, b, err);
  out.expect(ca == exit_ok && cb == exit_ok, "bench exit codes " + std::to_string(ca) + ", " + std::to_string(cb));
  out.expect(a.str() == b.str(), "bench CSV differs between runs");
  const std::string csv = a.str();
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  out.expect(rows == static_cast<long>(sweep_size) + 1, "bench emitted " + std::to_string(rows) + " lines");
  out.note(std::to_string(csv.size()) + " bytes compared");
  return out;
}

}  // namespace

int main() {
  const auto sweep = random_sweep(sweep_size, sweep_max_m, sweep_seed);

  report(1, "adversarial instance closed forms, schedule and OPT bound", adversarial_closed_forms());
  double sweep_time = 0;
  report(2, "competitive bounds on the random sweep", competitive_bounds_sweep(sweep, sweep_time));
  report(3, "duality chain D' <= P' <= OPT", duality_chain());
  report(4, "dual feasibility, potential, forest, waiting and relaxation audits", lemma_audits(sweep));
  report(5, "metric axioms, pair sandwich and group cost sandwich", metric_layer(sweep));
  report(6, "oracle cross-checks for circuits and optima", oracle_cross_checks(sweep));
  report(7, "bench CSV is byte-identical across runs", bench_determinism());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + (failures == 1 ? " criterion failed" : " criteria failed")) << "\n";
  return failures == 0 ? 0 : 1;
}
