#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kmpmd/cli.hpp"
#include "kmpmd/report.hpp"

using namespace kmpmd;
namespace fs = std::filesystem;

namespace {

struct Call {
  int code;
  std::string out;
  std::string err;
};

Call cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "kmpmd_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gen, run, opt, lp and audit on the adversarial instance") {
  const auto file = (scratch() / "adv.json").string();
  REQUIRE(cli({"gen", "--kind", "adversarial", "--k", "2", "--s", "1", "--epsilon", "1/100", "--out", file})
              .code == exit_ok);

  const auto run = cli({"run", "--instance", file});
  REQUIRE(run.code == exit_ok);
  const auto doc = nlohmann::json::parse(run.out);
  CHECK(doc["result"]["alg"] == "201/50");
  CHECK(doc.contains("instance"));
  CHECK(doc["audits"].size() == 5);
  for (const auto& b : doc["bounds"]) CHECK(b["holds"] == true);

  const auto summary = nlohmann::json::parse(cli({"run", "--instance", file, "--trace", "summary"}).out);
  CHECK(summary["audits"].size() == 3);

  const auto opt = nlohmann::json::parse(cli({"opt", "--instance", file}).out);
  CHECK(opt["opt"] == "2");

  const auto lp = nlohmann::json::parse(cli({"lp", "--instance", file}).out);
  CHECK(lp["status"] == "optimal");
  CHECK(lp["phase1"] == "0");
  CHECK(cli({"lp", "--instance", file, "--dump"}).out.find("status optimal") != std::string::npos);

  const auto audit = cli({"audit", "--instance", file});
  CHECK(audit.code == exit_ok);
  CHECK(nlohmann::json::parse(audit.out)["passed"] == true);
}

TEST_CASE("exit codes") {
  const auto bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << "{\"k\": 2";
  CHECK(cli({"run", "--instance", bad}).code == exit_input);
  CHECK(cli({"run", "--instance", (scratch() / "missing.json").string()}).code == exit_input);
  CHECK(cli({"frobnicate"}).code == exit_input);
  CHECK(cli({}).code == exit_input);
  CHECK(cli({"--help"}).code == exit_ok);

  const auto big = (scratch() / "big.json").string();
  REQUIRE(cli({"gen", "--kind", "line_uniform", "--k", "2", "--m", "14", "--out", big}).code == exit_ok);
  CHECK(cli({"opt", "--instance", big, "--guard", "100"}).code == exit_guard);
  CHECK(cli({"lp", "--instance", big}).code == exit_guard);
  CHECK(cli({"run", "--instance", big, "--rate", "-1"}).code == exit_input);
  CHECK(cli({"run", "--instance", big, "--trace", "verbose"}).code == exit_input);
  // Audit skips the parts beyond its guards rather than failing.
  const auto audit = cli({"audit", "--instance", big});
  CHECK(audit.code == exit_ok);
  CHECK(nlohmann::json::parse(audit.out)["skipped"].size() > 0);

  CHECK(cli({"lowerbound", "--k", "2", "--s", "1", "--epsilon", "1/2"}).code == exit_input);
  CHECK(cli({"gen", "--kind", "nope"}).code == exit_input);
}

TEST_CASE("bench output is complete and reproducible") {
  const auto a = cli({"bench", "--kind", "line_uniform", "--k", "2", "--m", "8", "--count", "50", "--opt",
                      "--threads", "3"});
  const auto b = cli({"bench", "--kind", "line_uniform", "--k", "2", "--m", "8", "--count", "50", "--opt",
                      "--threads", "1"});
  REQUIRE(a.code == exit_ok);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "name,m,k,gamma,alg,dist,wait,dual,pprime,opt,ratio,bounds_ok,alg_approx,ratio_approx");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find(",true,") != std::string::npos);
  }
  CHECK(rows == 50);
  CHECK(nlohmann::json::parse(a.err)["bounds_ok"] == 50);
}

TEST_CASE("bench over a directory") {
  const auto dir = scratch() / "dir";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (int i = 0; i < 3; ++i) {
    const auto f = (dir / ("i" + std::to_string(i) + ".json")).string();
    REQUIRE(cli({"gen", "--kind", "explicit_random", "--k", "3", "--m", "6", "--seed", std::to_string(i),
                 "--metric", "dhc", "--out", f})
                .code == exit_ok);
  }
  const auto summary = (scratch() / "summary.json").string();
  const auto out = cli({"bench", "--dir", dir.string(), "--lp", "--opt", "--summary", summary});
  REQUIRE(out.code == exit_ok);
  CHECK(out.out.find("\ni0,6,3,1,") != std::string::npos);
  CHECK(out.out.find("\ni2,") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(summary))["instances"] == 3);
}

TEST_CASE("check-metric") {
  const auto ok = cli({"check-metric", "--metric", "dhc", "--points", "4", "--k", "3", "--samples", "200"});
  CHECK(ok.code == exit_ok);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc["axioms"].size() == 4);
  CHECK(doc["sandwich"]["failures"] == 0);
  CHECK(cli({"check-metric", "--metric", "line", "--points", "5", "--k", "4", "--mode", "sampled"}).code ==
        exit_ok);
  CHECK(cli({"check-metric", "--metric", "dmax", "--mode", "fuzzy"}).code == exit_input);
}

TEST_CASE("lowerbound report") {
  const auto out = cli({"lowerbound", "--k", "2", "--s", "1", "--epsilon", "1/100"});
  const auto doc = nlohmann::json::parse(out.out);
  CHECK(doc["alg"] == "201/50");
  CHECK(doc["opt"] == "2");
  // The closed form and the claimed lower bound on ALG do not hold, so the
  // report flags a violation.
  CHECK(out.code == exit_violation);
  const auto rep = lowerbound_report(2, 1, Rational(1, 100));
  CHECK(rep.schedule_matches);
  CHECK(rep.opt_claim_holds());
  CHECK(rep.ratio_holds());
  CHECK_FALSE(rep.alg_claim_holds());
  CHECK_FALSE(rep.closed_form_matches());
}

TEST_CASE("decimal rendering and bench rows") {
  CHECK(decimal(Rational(1, 3)) == "0.333333");
  CHECK(decimal(Rational(-5, 2), 2) == "-2.50");
  BenchRow row;
  row.name = "x";
  row.m = 2;
  row.alg = 3;
  row.opt = 2;
  row.bounds_ok = true;
  CHECK(*row.ratio() == Rational(3, 2));
  CHECK(bench_csv_line(row) == "x,2,2,0,3,0,0,0,,2,3/2,true,3.000000,1.500000\n");
  row.opt.reset();
  CHECK_FALSE(row.ratio().has_value());
}
