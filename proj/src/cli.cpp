#include "kmpmd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmpmd/audit.hpp"
#include "kmpmd/engine.hpp"
#include "kmpmd/errors.hpp"
#include "kmpmd/lp.hpp"
#include "kmpmd/metric.hpp"
#include "kmpmd/offline.hpp"
#include "kmpmd/report.hpp"

namespace kmpmd {

using ordered_json = nlohmann::ordered_json;

namespace {

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

MetricKind parse_metric(const std::string& name) {
  if (name == "line") return MetricKind::line_diameter;
  if (name == "dmax") return MetricKind::dmax_over_base;
  if (name == "dhc") return MetricKind::dhc_over_base;
  throw InputError("unknown metric " + name);
}

ordered_json partition_json(const Partition& p) {
  ordered_json out = ordered_json::array();
  for (const auto& g : p) out.push_back(g);
  return out;
}

ordered_json audit_entry(const AuditReport& a) {
  ordered_json j;
  j["name"] = a.name;
  j["passed"] = a.passed();
  j["checks"] = a.checks;
  j["violations"] = a.violations;
  if (!a.notes.empty()) j["notes"] = a.notes;
  return j;
}

struct GenArgs {
  std::string kind = "line_uniform";
  int k = 2;
  std::size_t m = 0;
  int s = 1;
  std::string epsilon = "1/100";
  std::string spacing = "1";
  std::uint64_t seed = 1;
  std::string metric = "dmax";
  std::size_t points = 5;
  std::int64_t span = 20;
  std::int64_t horizon = 20;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Instance inst = [&] {
    if (a.kind == "adversarial") {
      return gen_adversarial_line(a.k, a.s, parse_rational(a.epsilon, "epsilon"),
                                  parse_rational(a.spacing, "spacing"));
    }
    RandomParams params;
    params.points = a.points;
    params.span = a.span;
    params.horizon = a.horizon;
    params.metric = parse_metric(a.metric);
    const std::size_t m = a.m == 0 ? static_cast<std::size_t>(a.k) * 2 : a.m;
    if (a.kind == "line_uniform") return gen_random(RandomKind::line_uniform, a.k, m, a.seed, params);
    if (a.kind == "explicit_random") {
      return gen_random(RandomKind::explicit_random, a.k, m, a.seed, params);
    }
    throw InputError("unknown kind " + a.kind);
  }();
  emit(a.out, save_instance(inst), out);
  return exit_ok;
}

struct RunArgs {
  std::string instance;
  std::string trace = "full";
  std::string rate;
  std::string out;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Instance inst = load_instance_file(a.instance);
  EngineConfig config;
  if (a.trace == "summary") {
    config.trace = TraceLevel::summary;
  } else if (a.trace != "full") {
    throw InputError("trace must be full or summary");
  }
  if (!a.rate.empty()) {
    config.rate_override = parse_rational(a.rate, "rate");
    if (*config.rate_override <= 0) throw InputError("rate must be positive");
  }
  const RunResult r = run(inst, config);
  emit(a.out, run_report(inst, r, engine_audits(inst, r), competitive_bounds(inst, r)), out);
  return exit_ok;
}

int cmd_opt(const std::string& path, std::uint64_t guard, const std::string& dest, std::ostream& out) {
  const Instance inst = load_instance_file(path);
  const auto sol = brute_force_opt(inst, guard);
  ordered_json doc;
  doc["opt"] = sol.value.str();
  doc["opt_approx"] = decimal(sol.value);
  doc["partition"] = partition_json(sol.partition);
  doc["partitions_enumerated"] = partition_count(inst.m(), inst.k(), guard);
  emit(dest, doc.dump(2) + "\n", out);
  return exit_ok;
}

int cmd_lp(const std::string& path, std::size_t guard, bool dump, const std::string& dest,
           std::ostream& out) {
  const Instance inst = load_instance_file(path);
  const LPModel model = build_p_prime(inst, guard);
  const LPSolution sol = simplex_solve(model);
  if (dump) {
    emit(dest, dump_model(model) + dump_solution(model, sol), out);
    return exit_ok;
  }
  ordered_json doc;
  doc["status"] = to_string(sol.status);
  doc["variables"] = model.variables();
  doc["constraints"] = model.constraints.size();
  doc["provenance"] = model.provenance;
  doc["phase1"] = sol.phase1_value.str();
  doc["pivots"] = sol.pivots;
  if (sol.status == LPStatus::optimal) {
    doc["value"] = sol.value.str();
    doc["value_approx"] = decimal(sol.value);
  }
  emit(dest, doc.dump(2) + "\n", out);
  return exit_ok;
}

struct AuditArgs {
  std::string instance;
  std::size_t lp_guard = 10;
  std::uint64_t opt_guard = 10'000'000;
  std::size_t subset_guard = 16;
  std::string out;
};

int cmd_audit(const AuditArgs& a, std::ostream& out) {
  const Instance inst = load_instance_file(a.instance);
  const RunResult r = run(inst);
  auto audits = engine_audits(inst, r);

  AuditReport sandwich;
  sandwich.name = "optcost_sandwich";
  for (const auto& g : r.groups) {
    const auto s = verify_optcost_sandwich(inst, g.members);
    ++sandwich.checks;
    if (!s.holds) {
      sandwich.fail("group at time " + g.time.str() + ": " + s.lower.str() + " <= " + s.value.str() +
                    " <= " + s.upper.str() + " fails");
    }
  }
  audits.push_back(std::move(sandwich));

  std::vector<std::string> skipped;
  Partition engine_partition;
  for (const auto& g : r.groups) engine_partition.push_back(g.members);
  AuditReport feasible;
  feasible.name = "matching_feasible_for_relaxation";
  if (inst.m() <= a.subset_guard) {
    const auto f = check_p_prime_feasibility(inst, engine_partition, a.subset_guard);
    feasible.checks = f.subsets_checked;
    if (!f.feasible) {
      feasible.fail("subset " + std::to_string(f.witness) + " crossed " + std::to_string(f.crossing) +
                    " < " + std::to_string(f.required));
    }
    audits.push_back(std::move(feasible));
  } else {
    skipped.push_back(feasible.name);
  }

  std::optional<Rational> opt;
  if (partition_count(inst.m(), inst.k(), a.opt_guard) <= a.opt_guard) {
    opt = brute_force_opt(inst, a.opt_guard).value;
  } else {
    skipped.push_back("brute_force_opt");
  }
  std::optional<Rational> pprime;
  if (inst.m() <= a.lp_guard) {
    const auto sol = simplex_solve(build_p_prime(inst, a.lp_guard));
    AuditReport lp;
    lp.name = "relaxation_solved";
    ++lp.checks;
    if (sol.status != LPStatus::optimal) lp.fail("simplex status " + to_string(sol.status));
    if (!sol.phase1_value.is_zero()) lp.fail("phase 1 value " + sol.phase1_value.str());
    if (sol.status == LPStatus::optimal) pprime = sol.value;
    audits.push_back(std::move(lp));
  } else {
    skipped.push_back("relaxation_solved");
  }
  if (opt && pprime) {
    const auto chain = verify_duality_chain(r.dual_objective, *pprime, *opt);
    AuditReport c;
    c.name = "duality_chain";
    ++c.checks;
    if (!chain.holds()) {
      c.fail("D' = " + chain.dual.str() + ", P' = " + chain.primal.str() + ", OPT = " + chain.opt.str());
    }
    c.notes.push_back("D' = " + chain.dual.str() + ", P' = " + chain.primal.str() + ", OPT = " +
                      chain.opt.str());
    audits.push_back(std::move(c));
  } else {
    skipped.push_back("duality_chain");
  }

  const auto bounds = competitive_bounds(inst, r);
  ordered_json doc;
  doc["instance"] = a.instance;
  ordered_json aj = ordered_json::array();
  bool ok = true;
  for (const auto& x : audits) {
    aj.push_back(audit_entry(x));
    ok = ok && x.passed();
  }
  doc["audits"] = std::move(aj);
  ordered_json bj = ordered_json::array();
  for (const auto& b : bounds) {
    bj.push_back({{"name", b.name}, {"lhs", b.lhs.str()}, {"rhs", b.rhs.str()}, {"holds", b.holds}});
    ok = ok && b.holds;
  }
  doc["bounds"] = std::move(bj);
  doc["skipped"] = skipped;
  doc["passed"] = ok;
  emit(a.out, doc.dump(2) + "\n", out);
  return ok ? exit_ok : exit_violation;
}

struct BenchArgs {
  std::string dir;
  std::string kind = "line_uniform";
  std::size_t count = 50;
  int k = 2;
  std::size_t m = 8;
  std::size_t max_m = 20;
  std::uint64_t seed = 1;
  std::string metric = "dmax";
  unsigned threads = 0;
  bool with_lp = false;
  std::size_t lp_guard = 10;
  bool with_opt = false;
  std::uint64_t opt_guard = 10'000'000;
  std::string out;
  std::string summary;
};

std::vector<NamedInstance> bench_inputs(const BenchArgs& a) {
  std::vector<NamedInstance> items;
  if (!a.dir.empty()) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(a.dir, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw InputError("cannot read directory " + a.dir);
    std::sort(files.begin(), files.end());
    for (const auto& f : files) items.push_back({f.stem().string(), load_instance_file(f.string())});
    return items;
  }
  if (a.kind == "sweep") return random_sweep(a.count, a.max_m, a.seed);
  RandomKind kind;
  if (a.kind == "line_uniform") {
    kind = RandomKind::line_uniform;
  } else if (a.kind == "explicit_random") {
    kind = RandomKind::explicit_random;
  } else {
    throw InputError("unknown bench kind " + a.kind);
  }
  RandomParams params;
  params.metric = parse_metric(a.metric);
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::uint64_t s = a.seed + i;
    items.push_back({a.kind + "-k" + std::to_string(a.k) + "-m" + std::to_string(a.m) + "-s" +
                         std::to_string(s),
                     gen_random(kind, a.k, a.m, s, params)});
  }
  return items;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto items = bench_inputs(a);
  BenchOptions options{a.with_lp, a.lp_guard, a.with_opt, a.opt_guard};
  std::vector<BenchRow> rows(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        rows[i] = bench_row(items[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = a.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, items.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::string csv = bench_csv_header();
  std::size_t bounds_ok = 0;
  std::optional<Rational> worst;
  for (const auto& row : rows) {
    csv += bench_csv_line(row);
    bounds_ok += row.bounds_ok ? 1 : 0;
    if (const auto r = row.ratio(); r && (!worst || *r > *worst)) worst = r;
  }
  emit(a.out, csv, out);

  ordered_json summary;
  summary["instances"] = rows.size();
  summary["bounds_ok"] = bounds_ok;
  if (worst) {
    summary["max_ratio"] = worst->str();
    summary["max_ratio_approx"] = decimal(*worst);
  }
  if (a.summary.empty()) {
    err << summary.dump() << "\n";
  } else {
    emit(a.summary, summary.dump(2) + "\n", out);
  }
  return bounds_ok == rows.size() ? exit_ok : exit_violation;
}

struct MetricArgs {
  std::string instance;
  std::string metric = "dmax";
  std::size_t points = 4;
  int k = 3;
  std::string mode = "exhaustive";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_check_metric(const MetricArgs& a, std::ostream& out) {
  const MetricSpace space = a.instance.empty() ? random_space(parse_metric(a.metric), a.points, a.k, a.seed)
                                               : load_instance_file(a.instance).space();
  AxiomCheckOptions options;
  if (a.mode == "sampled") {
    options.mode = AxiomCheckOptions::Mode::sampled;
  } else if (a.mode != "exhaustive") {
    throw InputError("mode must be exhaustive or sampled");
  }
  options.samples = a.samples;
  options.seed = a.seed;
  const auto report = verify_h_axioms(space, options);

  ordered_json doc;
  doc["metric"] = to_string(space.kind());
  doc["points"] = space.size();
  doc["k"] = space.k();
  ordered_json axioms = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json j{{"axiom", r.axiom}, {"passed", r.passed}, {"checks", r.checks}};
    if (!r.passed) {
      j["tuple"] = r.tuple;
      j["other"] = r.other;
      if (r.anchor) j["anchor"] = *r.anchor;
      if (r.split) j["split"] = *r.split;
      j["detail"] = r.detail;
    }
    axioms.push_back(std::move(j));
  }
  doc["axioms"] = std::move(axioms);

  std::mt19937_64 rng(a.seed);
  std::uniform_int_distribution<PointId> point(0, space.size() - 1);
  std::uniform_int_distribution<int> slot(0, space.k() - 1);
  std::size_t failures = 0;
  ordered_json first_failure;
  for (std::size_t i = 0; i < a.samples && space.size() > 0; ++i) {
    std::vector<PointId> tuple(static_cast<std::size_t>(space.k()));
    for (auto& p : tuple) p = point(rng);
    const PointId anchor = tuple[static_cast<std::size_t>(slot(rng))];
    const auto s = verify_sandwich(space, tuple, anchor);
    if (!s.holds && failures++ == 0) {
      first_failure = {{"tuple", tuple}, {"anchor", anchor}, {"lower", s.lower.str()},
                       {"value", s.value.str()}, {"upper", s.upper.str()}};
    }
  }
  doc["sandwich"] = {{"samples", a.samples}, {"failures", failures}};
  if (failures > 0) doc["sandwich"]["first_failure"] = std::move(first_failure);
  const bool ok = report.all_passed() && failures == 0;
  doc["passed"] = ok;
  emit(a.out, doc.dump(2) + "\n", out);
  return ok ? exit_ok : exit_violation;
}

int cmd_lowerbound(int k, int s, const std::string& epsilon, std::uint64_t guard,
                   const std::string& dest, std::ostream& out) {
  const auto rep = lowerbound_report(k, s, parse_rational(epsilon, "epsilon"), guard);
  emit(dest, lowerbound_json(rep), out);
  return rep.all_hold() ? exit_ok : exit_violation;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GD-k simulator and exact verifier for k-way matching with delays", "kmpmd"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an instance file");
  g->add_option("--kind", gen.kind, "line_uniform | explicit_random | adversarial");
  g->add_option("--k", gen.k);
  g->add_option("--m", gen.m, "number of requests (random kinds)");
  g->add_option("--s", gen.s, "adversarial: number of k^2 blocks");
  g->add_option("--epsilon", gen.epsilon);
  g->add_option("--spacing", gen.spacing, "adversarial: coordinate gap");
  g->add_option("--seed", gen.seed);
  g->add_option("--metric", gen.metric, "explicit_random: dmax | dhc");
  g->add_option("--points", gen.points);
  g->add_option("--span", gen.span);
  g->add_option("--horizon", gen.horizon);
  g->add_option("--out", gen.out);

  RunArgs runa;
  auto* r = app.add_subcommand("run", "run GD-k and write a report");
  r->add_option("--instance", runa.instance)->required();
  r->add_option("--trace", runa.trace, "full | summary");
  r->add_option("--rate", runa.rate, "override the growth rate");
  r->add_option("--out", runa.out);

  std::string opt_instance, opt_out;
  std::uint64_t opt_guard = 10'000'000;
  auto* o = app.add_subcommand("opt", "exact offline optimum by enumeration");
  o->add_option("--instance", opt_instance)->required();
  o->add_option("--guard", opt_guard, "maximum number of partitions");
  o->add_option("--out", opt_out);

  std::string lp_instance, lp_out;
  std::size_t lp_guard = 12;
  bool lp_dump = false;
  auto* l = app.add_subcommand("lp", "build and solve the pair relaxation");
  l->add_option("--instance", lp_instance)->required();
  l->add_option("--guard", lp_guard, "maximum m");
  l->add_flag("--dump", lp_dump, "write the model and solution as text");
  l->add_option("--out", lp_out);

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "run every audit on one instance");
  au->add_option("--instance", audit.instance)->required();
  au->add_option("--lp-guard", audit.lp_guard);
  au->add_option("--opt-guard", audit.opt_guard);
  au->add_option("--subset-guard", audit.subset_guard);
  au->add_option("--out", audit.out);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run a sweep and emit CSV");
  b->add_option("--dir", bench.dir, "directory of instance files");
  b->add_option("--kind", bench.kind, "line_uniform | explicit_random | sweep");
  b->add_option("--count", bench.count);
  b->add_option("--k", bench.k);
  b->add_option("--m", bench.m);
  b->add_option("--max-m", bench.max_m, "sweep: largest m");
  b->add_option("--seed", bench.seed);
  b->add_option("--metric", bench.metric);
  b->add_option("--threads", bench.threads);
  b->add_flag("--lp", bench.with_lp, "solve the relaxation");
  b->add_option("--lp-guard", bench.lp_guard);
  b->add_flag("--opt", bench.with_opt, "compute the offline optimum");
  b->add_option("--opt-guard", bench.opt_guard);
  b->add_option("--out", bench.out);
  b->add_option("--summary", bench.summary, "summary file (stderr by default)");

  MetricArgs metric;
  auto* cm = app.add_subcommand("check-metric", "verify H-metric axioms and the pair sandwich");
  cm->add_option("--instance", metric.instance, "use the instance's space");
  cm->add_option("--metric", metric.metric, "line | dmax | dhc");
  cm->add_option("--points", metric.points);
  cm->add_option("--k", metric.k);
  cm->add_option("--mode", metric.mode, "exhaustive | sampled");
  cm->add_option("--samples", metric.samples);
  cm->add_option("--seed", metric.seed);
  cm->add_option("--out", metric.out);

  int lb_k = 2, lb_s = 1;
  std::string lb_eps = "1/100", lb_out;
  std::uint64_t lb_guard = 10'000'000;
  auto* lb = app.add_subcommand("lowerbound", "adversarial lower-bound report");
  lb->add_option("--k", lb_k);
  lb->add_option("--s", lb_s);
  lb->add_option("--epsilon", lb_eps);
  lb->add_option("--guard", lb_guard);
  lb->add_option("--out", lb_out);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*r) return cmd_run(runa, out);
    if (*o) return cmd_opt(opt_instance, opt_guard, opt_out, out);
    if (*l) return cmd_lp(lp_instance, lp_guard, lp_dump, lp_out, out);
    if (*au) return cmd_audit(audit, out);
    if (*b) return cmd_bench(bench, out, err);
    if (*cm) return cmd_check_metric(metric, out);
    if (*lb) return cmd_lowerbound(lb_k, lb_s, lb_eps, lb_guard, lb_out, out);
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return exit_guard;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << "\n";
    return exit_violation;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return exit_input;
  } catch (const std::domain_error& e) {
    err << "invalid value: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace kmpmd
