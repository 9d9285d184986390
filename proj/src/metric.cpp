#include "kmpmd/metric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kmpmd/errors.hpp"

namespace kmpmd {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::line_diameter: return "line";
    case MetricKind::dmax_over_base: return "dmax";
    case MetricKind::dhc_over_base: return "dhc";
  }
  return "?";
}

BasePairMetric::BasePairMetric(std::vector<std::vector<Rational>> dist) : dist_(std::move(dist)) {}

void BasePairMetric::validate() const {
  const std::size_t n = dist_.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (dist_[p].size() != n) throw InputError("distance matrix is not square");
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!dist_[p][p].is_zero()) {
      throw InputError("nonzero diagonal at point " + std::to_string(p));
    }
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dist_[p][q] != dist_[q][p]) {
        throw InputError("asymmetric distance between " + std::to_string(p) + " and " +
                         std::to_string(q));
      }
      if (dist_[p][q] <= 0) {
        throw InputError("non-positive distance between distinct points " + std::to_string(p) +
                         " and " + std::to_string(q));
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        if (dist_[p][r] > dist_[p][q] + dist_[q][r]) {
          throw InputError("triangle inequality fails: d(" + std::to_string(p) + "," +
                           std::to_string(r) + ") > d(" + std::to_string(p) + "," +
                           std::to_string(q) + ") + d(" + std::to_string(q) + "," +
                           std::to_string(r) + ")");
        }
      }
    }
  }
}

void validate_gamma(const Rational& gamma, int k) {
  if (k < 2) throw InputError("k must be at least 2");
  if (gamma < 1 || gamma > Rational(k - 1)) {
    throw InputError("gamma " + gamma.str() + " outside [1, k-1] for k = " + std::to_string(k));
  }
}

BasePairMetric random_base_metric(std::size_t n, std::int64_t max_weight, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> weight(1, max_weight);
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = weight(rng);
  }
  // Shortest-path closure enforces the triangle inequality.
  for (std::size_t via = 0; via < n; ++via) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && dist[i][via] + dist[via][j] < dist[i][j]) dist[i][j] = dist[i][via] + dist[via][j];
      }
    }
  }
  return BasePairMetric(std::move(dist));
}

MetricSpace random_space(MetricKind kind, std::size_t n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (kind == MetricKind::line_diameter) {
    std::vector<std::int64_t> pool(4 * n);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return MetricSpace::line(std::vector<Rational>(pool.begin(), pool.end()), k);
  }
  auto base = random_base_metric(n, 10, rng);
  return kind == MetricKind::dmax_over_base ? MetricSpace::dmax(std::move(base), k)
                                            : MetricSpace::dhc(std::move(base), k);
}

MetricSpace::MetricSpace(MetricKind kind, std::vector<Rational> coords, BasePairMetric base, int k,
                         Rational gamma, MetricOptions options)
    : kind_(kind),
      coords_(std::move(coords)),
      base_(std::move(base)),
      k_(k),
      gamma_(std::move(gamma)),
      options_(options) {
  validate_gamma(gamma_, k_);
}

MetricSpace MetricSpace::line(std::vector<Rational> coords, int k, Rational gamma,
                              MetricOptions options) {
  auto sorted = coords;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("line coordinates must be distinct");
  }
  return MetricSpace(MetricKind::line_diameter, std::move(coords), {}, k, std::move(gamma), options);
}

MetricSpace MetricSpace::dmax(BasePairMetric base, int k, Rational gamma, MetricOptions options) {
  base.validate();
  return MetricSpace(MetricKind::dmax_over_base, {}, std::move(base), k, std::move(gamma), options);
}

MetricSpace MetricSpace::dhc(BasePairMetric base, int k, Rational gamma, MetricOptions options) {
  base.validate();
  return MetricSpace(MetricKind::dhc_over_base, {}, std::move(base), k, std::move(gamma), options);
}

MetricSpace MetricSpace::unchecked(MetricKind kind, BasePairMetric base, int k, Rational gamma,
                                   MetricOptions options) {
  if (kind == MetricKind::line_diameter) {
    throw std::invalid_argument("unchecked construction applies to explicit spaces only");
  }
  return MetricSpace(kind, {}, std::move(base), k, std::move(gamma), options);
}

MetricSpace MetricSpace::with_gamma(Rational gamma) const {
  validate_gamma(gamma, k_);
  MetricSpace copy = *this;
  copy.gamma_ = std::move(gamma);
  return copy;
}

std::size_t MetricSpace::size() const {
  return kind_ == MetricKind::line_diameter ? coords_.size() : base_.size();
}

Rational MetricSpace::base_distance(PointId p, PointId q) const {
  if (kind_ == MetricKind::line_diameter) return (coords_[p] - coords_[q]).abs();
  return base_(p, q);
}

void MetricSpace::check_tuple(std::span<const PointId> tuple) const {
  if (tuple.size() != static_cast<std::size_t>(k_)) {
    throw std::invalid_argument("tuple has " + std::to_string(tuple.size()) +
                                " entries, expected k = " + std::to_string(k_));
  }
  const std::size_t n = size();
  for (PointId p : tuple) {
    if (p >= n) throw std::invalid_argument("unknown point id " + std::to_string(p));
  }
}

Rational MetricSpace::k_distance(std::span<const PointId> tuple) const {
  check_tuple(tuple);
  switch (kind_) {
    case MetricKind::line_diameter: {
      const auto [lo, hi] = std::minmax_element(
          tuple.begin(), tuple.end(),
          [this](PointId a, PointId b) { return coords_[a] < coords_[b]; });
      return coords_[*hi] - coords_[*lo];
    }
    case MetricKind::dmax_over_base: {
      Rational best = 0;
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
          if (base_(tuple[i], tuple[j]) > best) best = base_(tuple[i], tuple[j]);
        }
      }
      return best;
    }
    case MetricKind::dhc_over_base:
      return circuit_distance(tuple);
  }
  throw std::logic_error("unreachable");
}

// Fixes tuple[0] as the start and enumerates orders of the rest, skipping the
// mirror image of every circuit.
Rational MetricSpace::circuit_distance(std::span<const PointId> tuple) const {
  if (k_ > options_.circuit_guard) {
    throw GuardExceeded("d_HC enumeration guard: k = " + std::to_string(k_) + " > " +
                        std::to_string(options_.circuit_guard));
  }
  std::vector<std::size_t> order(tuple.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  std::optional<Rational> best;
  do {
    if (order.size() >= 2 && order.front() > order.back()) continue;
    Rational cost = base_(tuple[0], tuple[order.front()]);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      cost += base_(tuple[order[i]], tuple[order[i + 1]]);
    }
    cost += base_(tuple[order.back()], tuple[0]);
    if (!best || cost < *best) best = std::move(cost);
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

Rational MetricSpace::induced_pair_distance(PointId p, PointId q) const {
  std::vector<PointId> tuple(static_cast<std::size_t>(k_), q);
  tuple[0] = p;
  Rational d = k_distance(tuple);
  std::fill(tuple.begin(), tuple.end(), p);
  tuple[0] = q;
  return d + k_distance(tuple);
}

// ---------------------------------------------------------------------------

bool AxiomReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.passed; });
}

const AxiomResult& AxiomReport::find(std::string_view axiom) const {
  for (const auto& r : results) {
    if (r.axiom == axiom) return r;
  }
  throw std::out_of_range("no axiom result named " + std::string(axiom));
}

namespace {

// Calls fn(tuple) for every tuple in [0, n)^k.
template <typename Fn>
void for_each_tuple(std::size_t n, int k, Fn&& fn) {
  std::vector<PointId> tuple(static_cast<std::size_t>(k), 0);
  while (true) {
    fn(static_cast<const std::vector<PointId>&>(tuple));
    std::size_t pos = 0;
    while (pos < tuple.size() && ++tuple[pos] == n) tuple[pos++] = 0;
    if (pos == tuple.size()) return;
  }
}

std::uint64_t elem_mask(std::span<const PointId> tuple) {
  std::uint64_t mask = 0;
  for (PointId p : tuple) mask |= std::uint64_t{1} << p;
  return mask;
}

class AxiomChecker {
 public:
  AxiomChecker(const MetricSpace& space, std::uint64_t seed) : space_(space), rng_(seed) {
    pi_.axiom = "Pi";
    od_.axiom = "O_D";
    delta_.axiom = "Delta_H";
    sep_.axiom = "S_H";
  }

  void permutation(const std::vector<PointId>& tuple, const Rational& value) {
    std::vector<std::size_t> order(tuple.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<PointId> permuted(tuple.size());
    do {
      for (std::size_t i = 0; i < order.size(); ++i) permuted[i] = tuple[order[i]];
      check_permuted(tuple, permuted, value);
    } while (pi_.passed && std::next_permutation(order.begin(), order.end()));
  }

  void random_permutation(const std::vector<PointId>& tuple, const Rational& value) {
    auto permuted = tuple;
    std::shuffle(permuted.begin(), permuted.end(), rng_);
    check_permuted(tuple, permuted, value);
  }

  void definiteness(const std::vector<PointId>& tuple, const Rational& value) {
    ++od_.checks;
    if (!od_.passed) return;
    const bool all_equal = std::adjacent_find(tuple.begin(), tuple.end(),
                                              std::not_equal_to<>()) == tuple.end();
    if (value < 0 || (value.is_zero() != all_equal)) {
      od_.passed = false;
      od_.tuple = tuple;
      od_.detail = "d_H = " + value.str() + (all_equal ? " on an all-equal tuple"
                                                       : " on a tuple with distinct points");
    }
  }

  void triangle(const std::vector<PointId>& tuple, const Rational& value, PointId anchor,
                int split) {
    ++delta_.checks;
    if (!delta_.passed) return;
    const auto k = tuple.size();
    std::vector<PointId> left(k, anchor), right(k, anchor);
    for (std::size_t j = 0; j < static_cast<std::size_t>(split); ++j) left[j] = tuple[j];
    for (std::size_t j = static_cast<std::size_t>(split); j < k; ++j) right[j] = tuple[j];
    const Rational bound = space_.k_distance(left) + space_.k_distance(right);
    if (value > bound) {
      delta_.passed = false;
      delta_.tuple = tuple;
      delta_.anchor = anchor;
      delta_.split = split;
      delta_.other = left;
      delta_.other.insert(delta_.other.end(), right.begin(), right.end());
      delta_.detail = "d_H = " + value.str() + " exceeds split bound " + bound.str();
    }
  }

  // small is drawn from elem(large); checks the subset or equal-set clause.
  void separation(const std::vector<PointId>& small, const Rational& small_value,
                  const std::vector<PointId>& large, const Rational& large_value) {
    ++sep_.checks;
    if (!sep_.passed) return;
    const bool equal = elem_mask(small) == elem_mask(large);
    const Rational bound = equal ? space_.gamma() * large_value : large_value;
    if (small_value > bound) {
      sep_.passed = false;
      sep_.tuple = small;
      sep_.other = large;
      sep_.detail = std::string(equal ? "equal element sets" : "strict subset") + ": d_H = " +
                    small_value.str() + " > " + bound.str();
    }
  }

  std::mt19937_64& rng() { return rng_; }
  AxiomResult& sep() { return sep_; }

  AxiomReport report() && {
    AxiomReport r;
    r.results = {std::move(pi_), std::move(od_), std::move(delta_), std::move(sep_)};
    return r;
  }

 private:
  void check_permuted(const std::vector<PointId>& tuple, const std::vector<PointId>& permuted,
                      const Rational& value) {
    ++pi_.checks;
    if (!pi_.passed) return;
    const Rational other = space_.k_distance(permuted);
    if (other != value) {
      pi_.passed = false;
      pi_.tuple = tuple;
      pi_.other = permuted;
      pi_.detail = "d_H changes from " + value.str() + " to " + other.str() + " under permutation";
    }
  }

  const MetricSpace& space_;
  std::mt19937_64 rng_;
  AxiomResult pi_, od_, delta_, sep_;
};

struct Extremes {
  Rational lo, hi;
  std::vector<PointId> lo_tuple, hi_tuple;
};

}  // namespace

AxiomReport verify_h_axioms(const MetricSpace& space, const AxiomCheckOptions& options) {
  const std::size_t n = space.size();
  const int k = space.k();
  AxiomChecker checker(space, options.seed);

  if (options.mode == AxiomCheckOptions::Mode::exhaustive) {
    // n^k * n * k, saturating.
    std::uint64_t cost = 1;
    bool over = n > 64;
    for (int i = 0; i < k && !over; ++i) {
      if (cost > options.guard / std::max<std::uint64_t>(n, 1)) over = true;
      cost *= n;
    }
    if (!over && cost > options.guard / (std::max<std::uint64_t>(n, 1) * k)) over = true;
    if (over) {
      throw GuardExceeded("exhaustive axiom check exceeds guard of " +
                          std::to_string(options.guard) + " evaluations");
    }

    std::map<std::uint64_t, Extremes> by_elements;
    for_each_tuple(n, k, [&](const std::vector<PointId>& tuple) {
      const Rational value = space.k_distance(tuple);
      checker.permutation(tuple, value);
      checker.definiteness(tuple, value);
      for (PointId a = 0; a < n; ++a) {
        for (int i = 1; i <= k; ++i) checker.triangle(tuple, value, a, i);
      }
      auto [it, inserted] = by_elements.try_emplace(elem_mask(tuple));
      auto& ext = it->second;
      if (inserted || value < ext.lo) {
        ext.lo = value;
        ext.lo_tuple = tuple;
      }
      if (inserted || value > ext.hi) {
        ext.hi = value;
        ext.hi_tuple = tuple;
      }
    });
    for (const auto& [mask, small] : by_elements) {
      for (const auto& [other_mask, large] : by_elements) {
        if ((mask & other_mask) != mask) continue;
        // Largest value on the subset side against the smallest on the superset side.
        checker.separation(small.hi_tuple, small.hi, large.lo_tuple, large.lo);
      }
    }
  } else {
    auto& rng = checker.rng();
    std::uniform_int_distribution<PointId> point(0, n - 1);
    std::uniform_int_distribution<int> split(1, k);
    std::vector<PointId> tuple(static_cast<std::size_t>(k));
    std::vector<PointId> small(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> slot(0, static_cast<std::size_t>(k) - 1);
    for (std::size_t s = 0; s < options.samples; ++s) {
      for (auto& p : tuple) p = point(rng);
      const Rational value = space.k_distance(tuple);
      checker.random_permutation(tuple, value);
      checker.definiteness(tuple, value);
      checker.triangle(tuple, value, point(rng), split(rng));
      for (auto& p : small) p = tuple[slot(rng)];
      const Rational small_value = space.k_distance(small);
      checker.separation(small, small_value, tuple, value);
      if (elem_mask(small) == elem_mask(tuple)) {
        checker.separation(tuple, value, small, small_value);
      }
    }
  }
  return std::move(checker).report();
}

SandwichReport verify_sandwich(const MetricSpace& space, std::span<const PointId> tuple,
                               PointId anchor) {
  if (std::find(tuple.begin(), tuple.end(), anchor) == tuple.end()) {
    throw std::invalid_argument("anchor " + std::to_string(anchor) + " is not in the tuple");
  }
  SandwichReport report;
  report.value = space.k_distance(tuple);
  Rational pair_sum = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      pair_sum += space.induced_pair_distance(tuple[i], tuple[j]);
    }
    report.upper += space.induced_pair_distance(anchor, tuple[i]);
  }
  const Rational k = space.k();
  report.lower = pair_sum / (space.gamma() * k * k);
  report.holds = report.lower <= report.value && report.value <= report.upper;
  return report;
}

}  // namespace kmpmd
