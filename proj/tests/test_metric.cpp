#include <doctest.h>

#include <random>
#include <stdexcept>

#include "kmpmd/errors.hpp"
#include "kmpmd/metric.hpp"
#include "oracles.hpp"

using namespace kmpmd;

namespace {

BasePairMetric square_plus_diagonal() {
  // Four corners of a unit square with diagonals 3/2.
  const Rational h(3, 2);
  return BasePairMetric({{0, 1, h, 1}, {1, 0, 1, h}, {h, 1, 0, 1}, {1, h, 1, 0}});
}

}  // namespace

TEST_CASE("line diameter and its induced pair metric") {
  const auto line = MetricSpace::line({0, Rational(5, 2), 4}, 3);
  const std::vector<PointId> t{2, 0, 1};
  CHECK(line.k_distance(t) == 4);
  CHECK(line.induced_pair_distance(0, 1) == 5);
  CHECK(line.induced_pair_distance(1, 1) == 0);
  CHECK(line.size() == 3);
  CHECK(to_string(line.kind()) == "line");
}

TEST_CASE("dmax and dhc on a square") {
  const auto dmax = MetricSpace::dmax(square_plus_diagonal(), 3);
  const auto dhc = MetricSpace::dhc(square_plus_diagonal(), 4);
  const std::vector<PointId> three{0, 1, 2};
  CHECK(dmax.k_distance(three) == Rational(3, 2));
  const std::vector<PointId> four{0, 2, 1, 3};
  CHECK(dhc.k_distance(four) == 4);
  // A repeated point costs nothing extra on the circuit.
  const std::vector<PointId> rep{0, 0, 2, 2};
  CHECK(dhc.k_distance(rep) == 3);
  CHECK(dmax.induced_pair_distance(0, 2) == 3);
  CHECK(dhc.induced_pair_distance(0, 1) == 4);
}

TEST_CASE("tuple arity and point ids are checked") {
  const auto dmax = MetricSpace::dmax(square_plus_diagonal(), 3);
  const std::vector<PointId> short_tuple{0, 1};
  const std::vector<PointId> bad_point{0, 1, 9};
  CHECK_THROWS_AS(dmax.k_distance(short_tuple), std::invalid_argument);
  CHECK_THROWS_AS(dmax.k_distance(bad_point), std::invalid_argument);
}

TEST_CASE("base metric validation names the broken property") {
  auto message = [](std::vector<std::vector<Rational>> d) {
    try {
      BasePairMetric(std::move(d)).validate();
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{0, 1}, {2, 0}}).find("asymmetric") != std::string::npos);
  CHECK(message({{1, 1}, {1, 0}}).find("diagonal") != std::string::npos);
  CHECK(message({{0, 0}, {0, 0}}).find("non-positive") != std::string::npos);
  CHECK(message({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}).find("triangle") != std::string::npos);
  CHECK(message({{0, 1}, {1}}).find("square") != std::string::npos);
  CHECK(message({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}).empty());
}

TEST_CASE("gamma must lie in [1, k-1]") {
  CHECK_THROWS_AS(MetricSpace::line({0, 1}, 2, 0), InputError);
  CHECK_THROWS_AS(MetricSpace::line({0, 1}, 3, 3), InputError);
  CHECK_NOTHROW(MetricSpace::line({0, 1}, 3, 2));
  CHECK_THROWS_AS(MetricSpace::line({0, 1}, 1), InputError);
  CHECK_THROWS_AS(MetricSpace::line({0, 0}, 2), InputError);
  const auto s = MetricSpace::line({0, 1}, 4);
  CHECK(s.with_gamma(Rational(5, 2)).gamma() == Rational(5, 2));
  CHECK_THROWS_AS(s.with_gamma(4), InputError);
}

TEST_CASE("circuit enumeration guard") {
  MetricOptions opts;
  opts.circuit_guard = 3;
  const auto dhc = MetricSpace::dhc(square_plus_diagonal(), 4, 1, opts);
  const std::vector<PointId> four{0, 1, 2, 3};
  CHECK_THROWS_AS(dhc.k_distance(four), GuardExceeded);
}

TEST_CASE("dhc agrees with full permutation enumeration") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const int k = 2 + trial % 5;
    const auto space = random_space(MetricKind::dhc_over_base, n, k, 100 + trial);
    std::uniform_int_distribution<PointId> point(0, n - 1);
    for (int s = 0; s < 20; ++s) {
      std::vector<PointId> t(static_cast<std::size_t>(k));
      for (auto& p : t) p = point(rng);
      CHECK(space.k_distance(t) == oracle::circuit_by_permutation(space.base().matrix(), t));
    }
  }
}

TEST_CASE("axioms hold exhaustively on small valid spaces") {
  for (auto kind : {MetricKind::line_diameter, MetricKind::dmax_over_base, MetricKind::dhc_over_base}) {
    for (int k = 2; k <= 3; ++k) {
      const auto space = random_space(kind, 4, k, 7);
      const auto report = verify_h_axioms(space);
      CHECK_MESSAGE(report.all_passed(), to_string(kind) << " k=" << k);
      CHECK(report.find("Delta_H").checks > 0);
      CHECK(report.find("S_H").checks > 0);
    }
  }
}

TEST_CASE("sampled axiom checks are deterministic per seed") {
  const auto space = random_space(MetricKind::dmax_over_base, 6, 4, 3);
  AxiomCheckOptions opts;
  opts.mode = AxiomCheckOptions::Mode::sampled;
  opts.samples = 300;
  const auto a = verify_h_axioms(space, opts);
  const auto b = verify_h_axioms(space, opts);
  CHECK(a.all_passed());
  CHECK(a.find("Pi").checks == b.find("Pi").checks);
}

TEST_CASE("exhaustive guard") {
  const auto space = random_space(MetricKind::dmax_over_base, 5, 4, 3);
  AxiomCheckOptions opts;
  opts.guard = 100;
  CHECK_THROWS_AS(verify_h_axioms(space, opts), GuardExceeded);
}

TEST_CASE("corrupted spaces produce witnesses") {
  SUBCASE("triangle violation breaks the split inequality") {
    const BasePairMetric bad({{0, 1, 10}, {1, 0, 1}, {10, 1, 0}});
    const auto space = MetricSpace::unchecked(MetricKind::dmax_over_base, bad, 2);
    const auto report = verify_h_axioms(space);
    const auto& r = report.find("Delta_H");
    REQUIRE_FALSE(r.passed);
    CHECK(r.anchor.has_value());
    CHECK(r.split.has_value());
    CHECK(space.k_distance(r.tuple) == 10);
  }
  SUBCASE("asymmetry breaks permutation invariance") {
    const BasePairMetric bad({{0, 1, 2}, {3, 0, 2}, {2, 2, 0}});
    const auto space = MetricSpace::unchecked(MetricKind::dmax_over_base, bad, 2);
    const auto report = verify_h_axioms(space);
    const auto& r = report.find("Pi");
    REQUIRE_FALSE(r.passed);
    CHECK(space.k_distance(r.tuple) != space.k_distance(r.other));
  }
  SUBCASE("zero distance between distinct points breaks definiteness") {
    const BasePairMetric bad({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
    const auto space = MetricSpace::unchecked(MetricKind::dhc_over_base, bad, 3);
    const auto report = verify_h_axioms(space);
    const auto& r = report.find("O_D");
    REQUIRE_FALSE(r.passed);
    CHECK(space.k_distance(r.tuple).is_zero());
  }
  SUBCASE("line spaces cannot be built unchecked") {
    CHECK_THROWS_AS(MetricSpace::unchecked(MetricKind::line_diameter, BasePairMetric(), 2),
                    std::invalid_argument);
  }
}

TEST_CASE("pair sandwich") {
  const auto line = MetricSpace::line({0, 1, 3}, 3);
  const std::vector<PointId> t{0, 1, 2};
  const auto s = verify_sandwich(line, t, 2);
  // pairs: d = 2, 6, 4 -> lower 12/9; value 3; upper from point 2: 6 + 4 + 0.
  CHECK(s.lower == Rational(4, 3));
  CHECK(s.value == 3);
  CHECK(s.upper == 10);
  CHECK(s.holds);
  CHECK_THROWS_AS(verify_sandwich(line, std::vector<PointId>{0, 0, 1}, 2), std::invalid_argument);

  std::mt19937_64 rng(9);
  for (auto kind : {MetricKind::line_diameter, MetricKind::dmax_over_base, MetricKind::dhc_over_base}) {
    const auto space = random_space(kind, 6, 4, 21);
    std::uniform_int_distribution<PointId> point(0, 5);
    std::uniform_int_distribution<int> slot(0, 3);
    for (int i = 0; i < 200; ++i) {
      std::vector<PointId> tuple(4);
      for (auto& p : tuple) p = point(rng);
      CHECK(verify_sandwich(space, tuple, tuple[static_cast<std::size_t>(slot(rng))]).holds);
    }
  }
}
