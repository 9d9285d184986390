#include "kmpmd/offline.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "kmpmd/errors.hpp"

namespace kmpmd {

Rational opt_cost_group(const Instance& instance, const Group& group) {
  std::vector<PointId> positions;
  Rational latest = 0;
  for (RequestId u : group) {
    positions.push_back(instance.request(u).pos);
    latest = max(latest, instance.request(u).atime);
  }
  Rational cost = instance.space().k_distance(positions);
  for (RequestId u : group) cost += latest - instance.request(u).atime;
  return cost;
}

Rational partition_cost(const Instance& instance, const Partition& partition) {
  Rational total = 0;
  for (const auto& g : partition) total += opt_cost_group(instance, g);
  return total;
}

std::uint64_t partition_count(std::size_t m, int k, std::uint64_t max) {
  // Product over rounds of C(remaining - 1, k - 1).
  const auto kk = static_cast<std::size_t>(k);
  std::uint64_t total = 1;
  for (std::size_t remaining = m; remaining >= kk && remaining > 0; remaining -= kk) {
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i < kk; ++i) {
      c = c * (remaining - i) / i;
      if (c > max) return max + 1;
    }
    const unsigned __int128 next = static_cast<unsigned __int128>(total) * c;
    if (next > max) return max + 1;
    total = static_cast<std::uint64_t>(next);
  }
  return total;
}

namespace {

// Groups the lowest unassigned request with each (k-1)-subset of the remaining
// requests in lexicographic order, so partitions appear in lexicographic order
// of their canonical form and the first optimum found is the least.
class PartitionSearch {
 public:
  explicit PartitionSearch(const Instance& instance)
      : instance_(instance), k_(static_cast<std::size_t>(instance.k())), used_(instance.m(), false) {}

  OfflineSolution solve() {
    recurse(Rational(0));
    return {best_partition_, *best_};
  }

 private:
  const Rational& group_cost(const Group& g) {
    std::uint64_t mask = 0;
    for (RequestId u : g) mask |= std::uint64_t{1} << u;
    auto it = cache_.find(mask);
    if (it == cache_.end()) it = cache_.emplace(mask, opt_cost_group(instance_, g)).first;
    return it->second;
  }

  void recurse(const Rational& cost) {
    const auto first = std::find(used_.begin(), used_.end(), false);
    if (first == used_.end()) {
      if (!best_ || cost < *best_) {
        best_ = cost;
        best_partition_ = current_;
      }
      return;
    }
    const auto lead = static_cast<RequestId>(first - used_.begin());
    used_[lead] = true;
    Group g{lead};
    choose(lead + 1, g, cost);
    used_[lead] = false;
  }

  void choose(RequestId from, Group& g, const Rational& cost) {
    if (g.size() == k_) {
      // Costs are nonnegative, so a partial cost at or above the incumbent
      // cannot lead to a strictly better (and hence earlier-found) optimum.
      Rational next = cost + group_cost(g);
      if (best_ && next >= *best_) return;
      current_.push_back(g);
      recurse(next);
      current_.pop_back();
      return;
    }
    for (RequestId u = from; u < used_.size(); ++u) {
      if (used_[u]) continue;
      used_[u] = true;
      g.push_back(u);
      choose(u + 1, g, cost);
      g.pop_back();
      used_[u] = false;
    }
  }

  const Instance& instance_;
  std::size_t k_;
  std::vector<bool> used_;
  Partition current_;
  Partition best_partition_;
  std::optional<Rational> best_;
  std::unordered_map<std::uint64_t, Rational> cache_;
};

}  // namespace

OfflineSolution brute_force_opt(const Instance& instance, std::uint64_t guard) {
  if (instance.m() > 64) throw GuardExceeded("brute force supports at most 64 requests");
  const auto count = partition_count(instance.m(), instance.k(), guard);
  if (count > guard) {
    throw GuardExceeded("partition count exceeds guard of " + std::to_string(guard));
  }
  if (instance.m() == 0) return {};
  return PartitionSearch(instance).solve();
}

void validate_partition(const Instance& instance, const Partition& partition) {
  std::vector<int> cover(instance.m(), 0);
  for (const auto& g : partition) {
    if (g.size() != static_cast<std::size_t>(instance.k())) {
      throw std::invalid_argument("not a partition: block of size " + std::to_string(g.size()));
    }
    for (RequestId u : g) {
      if (u >= instance.m()) throw std::invalid_argument("not a partition: unknown request");
      if (++cover[u] > 1) throw std::invalid_argument("not a partition: request in two blocks");
    }
  }
  if (std::find(cover.begin(), cover.end(), 0) != cover.end()) {
    throw std::invalid_argument("not a partition: uncovered request");
  }
}

PPrimeFeasibility check_p_prime_feasibility(const Instance& instance, const Partition& partition,
                                            std::size_t guard) {
  validate_partition(instance, partition);
  const std::size_t m = instance.m();
  if (m > guard || m > 62) {
    throw GuardExceeded("subset enumeration guard: m = " + std::to_string(m) + " > " +
                        std::to_string(guard));
  }
  // Support of the characteristic vector: all pairs inside a block.
  std::vector<std::pair<RequestId, RequestId>> edges;
  for (const auto& g : partition) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) edges.emplace_back(g[i], g[j]);
    }
  }
  PPrimeFeasibility out;
  const auto k = static_cast<std::size_t>(instance.k());
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t s = 1; s < full; ++s) {
    std::size_t crossing = 0;
    for (const auto& [u, v] : edges) {
      crossing += (((s >> u) ^ (s >> v)) & 1U) != 0 ? 1 : 0;
    }
    const auto sur = static_cast<std::size_t>(__builtin_popcountll(s)) % k;
    const std::size_t required = sur * (k - sur);
    ++out.subsets_checked;
    if (crossing < required && out.feasible) {
      out.feasible = false;
      out.witness = s;
      out.crossing = crossing;
      out.required = required;
    }
  }
  return out;
}

OptCostSandwich verify_optcost_sandwich(const Instance& instance, const Group& group) {
  if (group.empty()) throw std::invalid_argument("empty group");
  OptCostSandwich out;
  out.anchor = group.front();
  for (RequestId u : group) {
    const auto& cur = instance.request(out.anchor).atime;
    const auto& cand = instance.request(u).atime;
    if (cand > cur || (cand == cur && u > out.anchor)) out.anchor = u;
  }
  out.value = opt_cost_group(instance, group);
  Rational pair_sum = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      pair_sum += instance.opt_cost_edge(group[i], group[j]);
    }
    if (group[i] != out.anchor) out.upper += instance.opt_cost_edge(out.anchor, group[i]);
  }
  const Rational k = instance.k();
  out.lower = pair_sum / (instance.space().gamma() * k * k);
  out.holds = out.lower <= out.value && out.value <= out.upper;
  return out;
}

}  // namespace kmpmd
