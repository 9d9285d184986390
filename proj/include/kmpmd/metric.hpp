#pragma once

// Finite metric spaces and the k-point H-metrics built on top of them.
//
// Three k-point metrics are supported, all H-metrics with gamma = 1:
//   line_diameter   max coordinate minus min coordinate on the real line
//   dmax_over_base  largest pairwise base distance in the tuple
//   dhc_over_base   cheapest Hamiltonian circuit through the tuple (multiset)
//
// The induced pair metric d(p, q) = d_H(p, q, ..., q) + d_H(q, p, ..., p) is
// the only two-point distance used by the engine and the LP.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kmpmd/rational.hpp"

namespace kmpmd {

using PointId = std::size_t;

enum class MetricKind { line_diameter, dmax_over_base, dhc_over_base };

std::string to_string(MetricKind kind);

// Symmetric distance matrix over points 0..n-1.
class BasePairMetric {
 public:
  BasePairMetric() = default;
  explicit BasePairMetric(std::vector<std::vector<Rational>> dist);

  std::size_t size() const { return dist_.size(); }
  const Rational& operator()(PointId p, PointId q) const { return dist_[p][q]; }
  const std::vector<std::vector<Rational>>& matrix() const { return dist_; }

  // Throws InputError naming the first broken property: shape, zero diagonal,
  // symmetry, strict positivity off the diagonal, triangle inequality.
  void validate() const;

  friend bool operator==(const BasePairMetric&, const BasePairMetric&) = default;

 private:
  std::vector<std::vector<Rational>> dist_;
};

struct MetricOptions {
  // Largest k for which d_HC enumerates circuits.
  int circuit_guard = 8;

  friend bool operator==(const MetricOptions&, const MetricOptions&) = default;
};

class MetricSpace {
 public:
  // Coordinates must be pairwise distinct.
  static MetricSpace line(std::vector<Rational> coords, int k, Rational gamma = 1,
                          MetricOptions options = {});
  static MetricSpace dmax(BasePairMetric base, int k, Rational gamma = 1,
                          MetricOptions options = {});
  static MetricSpace dhc(BasePairMetric base, int k, Rational gamma = 1,
                         MetricOptions options = {});

  // Skips the base-metric validation so that broken spaces can be audited.
  static MetricSpace unchecked(MetricKind kind, BasePairMetric base, int k, Rational gamma = 1,
                               MetricOptions options = {});

  MetricKind kind() const { return kind_; }
  int k() const { return k_; }
  const Rational& gamma() const { return gamma_; }
  std::size_t size() const;
  const std::vector<Rational>& coords() const { return coords_; }
  const BasePairMetric& base() const { return base_; }
  const MetricOptions& options() const { return options_; }

  // Returns a copy with a different parameter; checks 1 <= gamma <= k - 1.
  MetricSpace with_gamma(Rational gamma) const;

  Rational base_distance(PointId p, PointId q) const;

  // d_H of a tuple of exactly k points.
  Rational k_distance(std::span<const PointId> tuple) const;

  Rational induced_pair_distance(PointId p, PointId q) const;

  friend bool operator==(const MetricSpace&, const MetricSpace&) = default;

 private:
  MetricSpace(MetricKind kind, std::vector<Rational> coords, BasePairMetric base, int k,
              Rational gamma, MetricOptions options);

  void check_tuple(std::span<const PointId> tuple) const;
  Rational circuit_distance(std::span<const PointId> tuple) const;

  MetricKind kind_ = MetricKind::line_diameter;
  std::vector<Rational> coords_;
  BasePairMetric base_;
  int k_ = 2;
  Rational gamma_ = 1;
  MetricOptions options_;
};

// Checks 1 <= gamma <= k - 1 (k >= 2 required). Throws InputError.
void validate_gamma(const Rational& gamma, int k);

// Integer weights uniform in [1, max_weight], closed under shortest paths.
BasePairMetric random_base_metric(std::size_t n, std::int64_t max_weight, std::mt19937_64& rng);

// A space over n points: distinct integer coordinates in [0, 4n) for the line,
// random_base_metric otherwise.
MetricSpace random_space(MetricKind kind, std::size_t n, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Axiom verification

struct AxiomCheckOptions {
  enum class Mode { exhaustive, sampled };
  Mode mode = Mode::exhaustive;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  // Exhaustive mode needs n^k * n * k below this many evaluations.
  std::uint64_t guard = 10'000'000;
};

struct AxiomResult {
  std::string axiom;  // "Pi", "O_D", "Delta_H", "S_H"
  bool passed = true;
  std::size_t checks = 0;
  // Counterexample on failure.
  std::vector<PointId> tuple;
  std::vector<PointId> other;  // permuted / comparison / split tuples
  std::optional<PointId> anchor;
  std::optional<int> split;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomResult> results;
  bool all_passed() const;
  const AxiomResult& find(std::string_view axiom) const;
};

// Throws GuardExceeded in exhaustive mode when the space is too large.
AxiomReport verify_h_axioms(const MetricSpace& space, const AxiomCheckOptions& options = {});

struct SandwichReport {
  Rational lower;
  Rational value;
  Rational upper;
  bool holds = false;
};

// lower = 1/(gamma k^2) * sum_{i<j} d(p_i, p_j), value = d_H(tuple),
// upper = sum_i d(anchor, p_i). Throws std::invalid_argument if the anchor is
// not in the tuple.
SandwichReport verify_sandwich(const MetricSpace& space, std::span<const PointId> tuple,
                               PointId anchor);

}  // namespace kmpmd
