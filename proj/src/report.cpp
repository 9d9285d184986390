#include "kmpmd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "kmpmd/errors.hpp"
#include "kmpmd/offline.hpp"
#include "kmpmd/lp.hpp"

namespace kmpmd {

using ordered_json = nlohmann::ordered_json;

std::string decimal(const Rational& value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value.to_double());
  return buf;
}

std::vector<BoundCheck> competitive_bounds(const Instance& instance, const RunResult& result) {
  const Rational m = instance.m();
  const Rational k = result.k;
  std::vector<BoundCheck> out;
  const Rational general = (Rational(4) * m * k + k * k) * result.gamma * result.dual_objective;
  out.push_back({"alg_le_4mk_plus_k2_gamma_dual", result.total_cost, general,
                 result.total_cost <= general});
  if (instance.space().kind() != MetricKind::dhc_over_base) {
    const Rational diameter = (Rational(4) * m + k * k) * result.dual_objective;
    out.push_back({"alg_le_4m_plus_k2_dual", result.total_cost, diameter,
                   result.total_cost <= diameter});
  }
  return out;
}

std::vector<AuditReport> engine_audits(const Instance& instance, const RunResult& result) {
  std::vector<AuditReport> out;
  if (result.trace == TraceLevel::full) {
    out.push_back(audit_dual_feasibility(result, instance));
    out.push_back(audit_potential_identity(result, instance));
  }
  out.push_back(audit_spanning_forest(result));
  if (result.default_rate) out.push_back(audit_cost_accounting(result, instance));
  out.push_back(audit_matching(result, instance));
  return out;
}

namespace {

ordered_json audit_json(const AuditReport& a) {
  ordered_json j;
  j["name"] = a.name;
  j["passed"] = a.passed();
  j["checks"] = a.checks;
  j["violations"] = a.violations;
  if (a.worst_slack) j["worst_slack"] = a.worst_slack->str();
  if (!a.notes.empty()) j["notes"] = a.notes;
  return j;
}

ordered_json ids_json(const std::vector<RequestId>& ids) {
  ordered_json j = ordered_json::array();
  for (RequestId u : ids) j.push_back(u);
  return j;
}

ordered_json result_json(const RunResult& r) {
  ordered_json j;
  j["k"] = r.k;
  j["gamma"] = r.gamma.str();
  j["rate"] = r.rate.str();
  j["default_rate"] = r.default_rate;
  j["alg"] = r.total_cost.str();
  j["alg_approx"] = decimal(r.total_cost);
  j["distance"] = r.distance_cost.str();
  j["waiting"] = r.waiting_cost.str();
  j["dual"] = r.dual_objective.str();
  ordered_json groups = ordered_json::array();
  for (const auto& g : r.groups) {
    ordered_json gj;
    gj["members"] = ids_json(g.members);
    gj["time"] = g.time.str();
    gj["distance"] = g.distance.str();
    gj["waiting"] = g.waiting.str();
    gj["set"] = g.source;
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  ordered_json sets = ordered_json::array();
  for (const auto& s : r.sets) {
    ordered_json sj;
    sj["id"] = s.id;
    sj["members"] = ids_json(s.members);
    sj["growth"] = s.growth.str();
    sj["birth"] = s.birth.str();
    if (s.death) sj["death"] = s.death->str();
    if (s.parents) sj["parents"] = {s.parents->first, s.parents->second};
    sets.push_back(std::move(sj));
  }
  j["sets"] = std::move(sets);
  ordered_json marked = ordered_json::array();
  for (const auto& e : r.marked) marked.push_back({{"u", e.u}, {"v", e.v}, {"time", e.time.str()}});
  j["marked"] = std::move(marked);
  j["trace"] = r.trace == TraceLevel::full ? "full" : "summary";
  ordered_json events = ordered_json::array();
  for (const auto& ev : r.events) {
    ordered_json ej;
    ej["kind"] = ev.kind == EventKind::arrival ? "arrival" : "tight";
    ej["time"] = ev.time.str();
    if (!ev.arrivals.empty()) ej["arrivals"] = ids_json(ev.arrivals);
    if (!ev.merges.empty()) {
      ordered_json merges = ordered_json::array();
      for (const auto& e : ev.merges) merges.push_back({e.u, e.v});
      ej["merges"] = std::move(merges);
    }
    if (!ev.groups.empty()) ej["groups"] = ev.groups;
    events.push_back(std::move(ej));
  }
  j["events"] = std::move(events);
  return j;
}

ordered_json bounds_json(const std::vector<BoundCheck>& bounds) {
  ordered_json out = ordered_json::array();
  for (const auto& b : bounds) {
    out.push_back({{"name", b.name}, {"lhs", b.lhs.str()}, {"rhs", b.rhs.str()}, {"holds", b.holds}});
  }
  return out;
}

}  // namespace

std::string run_report(const Instance& instance, const RunResult& result,
                       const std::vector<AuditReport>& audits,
                       const std::vector<BoundCheck>& bounds) {
  ordered_json doc;
  doc["instance"] = ordered_json::parse(save_instance(instance));
  doc["result"] = result_json(result);
  ordered_json aj = ordered_json::array();
  for (const auto& a : audits) aj.push_back(audit_json(a));
  doc["audits"] = std::move(aj);
  doc["bounds"] = bounds_json(bounds);
  return doc.dump(2) + "\n";
}

std::vector<NamedInstance> random_sweep(std::size_t count, std::size_t max_m, std::uint64_t seed) {
  static constexpr int ks[] = {2, 3, 4};
  std::vector<NamedInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int k = ks[i % 3];
    const std::size_t groups_max = std::max<std::size_t>(1, max_m / static_cast<std::size_t>(k));
    const std::uint64_t s = seed + i;
    const std::size_t m = static_cast<std::size_t>(k) * (1 + (s * 2654435761ULL >> 7) % groups_max);
    RandomParams params;
    std::string kind;
    Instance inst = [&] {
      switch ((i / 3) % 3) {
        case 0:
          kind = "line";
          return gen_random(RandomKind::line_uniform, k, m, s, params);
        case 1:
          kind = "dmax";
          params.metric = MetricKind::dmax_over_base;
          return gen_random(RandomKind::explicit_random, k, m, s, params);
        default:
          kind = "dhc";
          params.metric = MetricKind::dhc_over_base;
          return gen_random(RandomKind::explicit_random, k, m, s, params);
      }
    }();
    out.push_back({kind + "-k" + std::to_string(k) + "-m" + std::to_string(m) + "-s" +
                       std::to_string(s),
                   std::move(inst)});
  }
  return out;
}

std::optional<Rational> BenchRow::ratio() const {
  if (!opt) return std::nullopt;
  if (opt->is_zero()) return alg.is_zero() ? std::optional<Rational>(1) : std::nullopt;
  return alg / *opt;
}

BenchRow bench_row(const NamedInstance& item, const BenchOptions& options) {
  const auto& inst = item.instance;
  const RunResult r = run(inst, {std::nullopt, TraceLevel::summary});
  BenchRow row;
  row.name = item.name;
  row.m = inst.m();
  row.k = inst.k();
  row.gamma = inst.space().gamma();
  row.alg = r.total_cost;
  row.dist = r.distance_cost;
  row.wait = r.waiting_cost;
  row.dual = r.dual_objective;
  const auto bounds = competitive_bounds(inst, r);
  row.bounds_ok = std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.holds; });
  if (options.with_lp && inst.m() <= options.lp_guard) {
    const auto sol = simplex_solve(build_p_prime(inst, options.lp_guard));
    if (sol.status == LPStatus::optimal) row.pprime = sol.value;
  }
  if (options.with_opt && partition_count(inst.m(), inst.k(), options.opt_guard) <= options.opt_guard) {
    row.opt = brute_force_opt(inst, options.opt_guard).value;
  }
  return row;
}

std::string bench_csv_header() {
  return "name,m,k,gamma,alg,dist,wait,dual,pprime,opt,ratio,bounds_ok,alg_approx,ratio_approx\n";
}

std::string bench_csv_line(const BenchRow& row) {
  std::ostringstream out;
  const auto ratio = row.ratio();
  out << row.name << ',' << row.m << ',' << row.k << ',' << row.gamma << ',' << row.alg << ','
      << row.dist << ',' << row.wait << ',' << row.dual << ',';
  if (row.pprime) out << *row.pprime;
  out << ',';
  if (row.opt) out << *row.opt;
  out << ',';
  if (ratio) out << *ratio;
  out << ',' << (row.bounds_ok ? "true" : "false") << ',' << decimal(row.alg) << ',';
  if (ratio) out << decimal(*ratio);
  out << '\n';
  return out.str();
}

bool LowerBoundReport::all_hold() const {
  return alg_claim_holds() && closed_form_matches() && schedule_matches && opt_claim_holds() &&
         ratio_holds();
}

LowerBoundReport lowerbound_report(int k, int s, const Rational& epsilon, std::uint64_t opt_guard) {
  if (k < 2 || s < 1) throw InputError("lower-bound report needs k >= 2 and s >= 1");
  const std::size_t m = static_cast<std::size_t>(s) * static_cast<std::size_t>(k * k);
  const Rational limit = Rational(1) / std::max<std::size_t>(static_cast<std::size_t>(k * k), m);
  if (epsilon <= 0 || epsilon > limit) {
    throw InputError("epsilon must lie in (0, 1/max{k^2, m}] = (0, " + limit.str() + "]");
  }
  const Instance inst = gen_adversarial_line(k, s, epsilon);
  const RunResult r = run(inst, {std::nullopt, TraceLevel::summary});

  LowerBoundReport rep;
  rep.k = k;
  rep.s = s;
  rep.epsilon = epsilon;
  rep.m = m;
  const Rational mm = m;
  const Rational kk = k;
  rep.alg = r.total_cost;
  rep.alg_claim = mm + kk + (mm - kk) * epsilon;
  rep.alg_closed_form = Rational(2) * mm * (kk - 1) / kk + kk + (mm - kk) * epsilon;

  auto groups = r.groups;
  std::stable_sort(groups.begin(), groups.end(),
                   [](const MatchedGroup& a, const MatchedGroup& b) { return a.time < b.time; });
  rep.schedule_matches = groups.size() == m / static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    rep.group_times.push_back(groups[i].time);
    const Rational expected = i == 0 ? Rational(1) : 1 + Rational(2 * i) * epsilon;
    std::vector<RequestId> batch;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) batch.push_back(i * k + j);
    if (groups[i].time != expected || groups[i].members != batch) rep.schedule_matches = false;
  }

  rep.schedule_value =
      kk * (1 + epsilon + (kk * (kk - 1) - 2) * epsilon + (mm / (kk * kk) - 1) * kk * (kk - 1) * epsilon);
  rep.opt_claim = kk + kk * epsilon + kk * kk * kk * epsilon + mm * kk * epsilon;
  if (partition_count(m, k, opt_guard) <= opt_guard) rep.opt = brute_force_opt(inst, opt_guard).value;
  rep.ratio = rep.alg / rep.opt.value_or(rep.schedule_value);
  rep.ratio_floor = (mm + kk) / (4 * kk);
  return rep;
}

std::string lowerbound_json(const LowerBoundReport& rep) {
  ordered_json doc;
  doc["k"] = rep.k;
  doc["s"] = rep.s;
  doc["epsilon"] = rep.epsilon.str();
  doc["m"] = rep.m;
  doc["alg"] = rep.alg.str();
  doc["alg_approx"] = decimal(rep.alg);
  ordered_json times = ordered_json::array();
  for (const auto& t : rep.group_times) times.push_back(t.str());
  doc["group_times"] = std::move(times);
  if (rep.opt) doc["opt"] = rep.opt->str();
  doc["schedule_value"] = rep.schedule_value.str();
  doc["ratio"] = rep.ratio.str();
  doc["ratio_approx"] = decimal(rep.ratio);
  ordered_json checks = ordered_json::array();
  auto add = [&](const char* name, const Rational& lhs, const char* rel, const Rational& rhs, bool holds) {
    checks.push_back({{"name", name}, {"lhs", lhs.str()}, {"relation", rel}, {"rhs", rhs.str()},
                      {"holds", holds}});
  };
  add("alg_ge_claim", rep.alg, ">=", rep.alg_claim, rep.alg_claim_holds());
  add("alg_eq_closed_form", rep.alg, "==", rep.alg_closed_form, rep.closed_form_matches());
  add("opt_le_claim", rep.opt.value_or(rep.schedule_value), "<=", rep.opt_claim, rep.opt_claim_holds());
  add("ratio_ge_floor", rep.ratio, ">=", rep.ratio_floor, rep.ratio_holds());
  checks.push_back({{"name", "group_schedule"}, {"holds", rep.schedule_matches}});
  doc["checks"] = std::move(checks);
  doc["all_hold"] = rep.all_hold();
  return doc.dump(2) + "\n";
}

}  // namespace kmpmd
