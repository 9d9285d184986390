#pragma once

// Exact offline machinery: group cost, the brute-force optimum, and the
// executable forms of the pair-relaxation lemmas.

#include <cstdint>
#include <vector>

#include "kmpmd/instance.hpp"
#include "kmpmd/rational.hpp"

namespace kmpmd {

using Group = std::vector<RequestId>;
using Partition = std::vector<Group>;

// d_H over the positions plus waiting until the last arrival in the group.
Rational opt_cost_group(const Instance& instance, const Group& group);

Rational partition_cost(const Instance& instance, const Partition& partition);

struct OfflineSolution {
  Partition partition;  // canonical: each group sorted, groups sorted by first member
  Rational value;
};

// m! / ((k!)^(m/k) (m/k)!), saturated at max+1.
std::uint64_t partition_count(std::size_t m, int k, std::uint64_t max);

// Exhaustive minimum over all perfect k-way matchings. Among optima returns the
// lexicographically least canonical partition. Throws GuardExceeded when the
// partition count exceeds the guard.
OfflineSolution brute_force_opt(const Instance& instance, std::uint64_t guard = 10'000'000);

// Throws std::invalid_argument unless the groups are disjoint, of size k, and
// cover every request.
void validate_partition(const Instance& instance, const Partition& partition);

struct PPrimeFeasibility {
  bool feasible = true;
  std::size_t subsets_checked = 0;
  std::uint64_t witness = 0;    // violating subset as a bitmask, when infeasible
  std::size_t crossing = 0;     // sum of x_e over delta(witness)
  std::size_t required = 0;     // sur(S) (k - sur(S))
};

// Builds the 0/1 edge vector of the partition and checks every cut constraint
// sum_{e in delta(S)} x_e >= sur(S) (k - sur(S)). Throws GuardExceeded when
// m > guard and std::invalid_argument for a non-partition.
PPrimeFeasibility check_p_prime_feasibility(const Instance& instance, const Partition& partition,
                                            std::size_t guard = 16);

struct OptCostSandwich {
  Rational lower;  // 1/(gamma k^2) sum_{i<j} opt-cost(v_i, v_j)
  Rational value;  // opt-cost(F)
  Rational upper;  // sum_i opt-cost(v, v_i), v the latest arrival (largest id on ties)
  RequestId anchor = 0;
  bool holds = false;
};

OptCostSandwich verify_optcost_sandwich(const Instance& instance, const Group& group);

}  // namespace kmpmd
