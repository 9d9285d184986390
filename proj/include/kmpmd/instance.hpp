#pragma once

// Request sequences, the JSON instance document, and instance generators.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kmpmd/metric.hpp"
#include "kmpmd/rational.hpp"

namespace kmpmd {

using RequestId = std::size_t;

struct Request {
  RequestId id = 0;
  Rational atime;
  PointId pos = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

class Instance {
 public:
  // Validates ids, arrival order, positions and m mod k. Throws InputError.
  Instance(MetricSpace space, std::vector<Request> requests);

  int k() const { return space_.k(); }
  const MetricSpace& space() const { return space_; }
  const std::vector<Request>& requests() const { return requests_; }
  const Request& request(RequestId id) const { return requests_[id]; }
  std::size_t m() const { return requests_.size(); }

  // opt-cost of a pair: induced distance plus arrival gap.
  Rational opt_cost_edge(RequestId u, RequestId v) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  MetricSpace space_;
  std::vector<Request> requests_;
};

// Instance document (JSON):
//   { "k": 2, "gamma": "1",
//     "metric": { "type": "line" } |
//               { "type": "dmax" | "dhc", "n": 3, "dist": [[], ["2"], ["3", "1"]] },
//     "requests": [ { "id": 0, "atime": "0", "pos": "5/2" }, ... ] }
// "dist" row i holds d(i, 0..i-1). Line positions are rational coordinates;
// explicit positions are integer point indices. Throws InputError.
Instance load_instance(std::string_view text);
Instance load_instance_file(const std::string& path);

// Canonical document with deterministic field order.
std::string save_instance(const Instance& instance);
void save_instance_file(const Instance& instance, const std::string& path);

// Points at 0, spacing, 2*spacing, ... on a line. The default spacing 1 puts
// adjacent points at induced distance 2.
// s*k batches of k requests, one per point; batch i arrives at 0 for i = 1 and
// at 1 + (2i - 3) * epsilon afterwards.
Instance gen_adversarial_line(int k, int s, const Rational& epsilon, const Rational& spacing = 1);

enum class RandomKind { line_uniform, explicit_random };

struct RandomParams {
  std::int64_t span = 20;         // line_uniform: coordinates in [0, span]
  std::int64_t horizon = 20;      // arrival times in [0, horizon]
  std::size_t points = 5;         // explicit_random: number of points
  std::int64_t max_weight = 10;   // explicit_random: raw weights in [1, max_weight]
  MetricKind metric = MetricKind::dmax_over_base;  // explicit_random: dmax or dhc
};

// Deterministic for a fixed seed. Throws InputError on invalid parameters.
Instance gen_random(RandomKind kind, int k, std::size_t m, std::uint64_t seed,
                    const RandomParams& params = {});

}  // namespace kmpmd
