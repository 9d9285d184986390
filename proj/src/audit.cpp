#include "kmpmd/audit.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace kmpmd {

void AuditReport::fail(std::string message) { violations.push_back(std::move(message)); }

namespace {

using Membership = std::vector<std::vector<char>>;

Membership membership(const RunResult& result, std::size_t m) {
  Membership in(result.sets.size(), std::vector<char>(m, 0));
  for (const auto& s : result.sets) {
    for (RequestId u : s.members) in[s.id][u] = 1;
  }
  return in;
}

void require_full_trace(const RunResult& result, const char* audit) {
  if (result.trace != TraceLevel::full) {
    throw std::invalid_argument(std::string(audit) + " needs a run recorded at full trace level");
  }
}

std::string pair_name(RequestId u, RequestId v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

// Sets with positive growth at a snapshot.
std::vector<SetId> growing(const EventRecord& ev) {
  std::vector<SetId> out;
  for (SetId s = 0; s < ev.growth.size(); ++s) {
    if (ev.growth[s] > 0) out.push_back(s);
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Edge sequence of the unique path between two vertices of a tree.
std::vector<MarkedEdge> tree_path(const std::vector<MarkedEdge>& tree, RequestId from, RequestId to,
                                  std::size_t m) {
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    adj[tree[i].u].push_back(i);
    adj[tree[i].v].push_back(i);
  }
  std::vector<std::optional<std::size_t>> via(m);
  std::vector<char> seen(m, 0);
  std::queue<RequestId> queue;
  queue.push(from);
  seen[from] = 1;
  while (!queue.empty()) {
    const RequestId x = queue.front();
    queue.pop();
    for (std::size_t e : adj[x]) {
      const RequestId y = tree[e].u == x ? tree[e].v : tree[e].u;
      if (seen[y]) continue;
      seen[y] = 1;
      via[y] = e;
      queue.push(y);
    }
  }
  std::vector<MarkedEdge> path;
  if (!seen[to]) return path;
  for (RequestId x = to; x != from;) {
    const auto& e = tree[*via[x]];
    path.push_back(e);
    x = e.u == x ? e.v : e.u;
  }
  return path;
}

}  // namespace

AuditReport audit_dual_feasibility(const RunResult& result, const Instance& instance) {
  require_full_trace(result, "audit_dual_feasibility");
  AuditReport report;
  report.name = "dual_feasibility";
  const std::size_t m = instance.m();
  const Rational k = result.k;
  const Rational scale = Rational(1) / (instance.space().gamma() * k * k);
  std::vector<Rational> cap(m * m);
  for (RequestId u = 0; u < m; ++u) {
    for (RequestId v = u + 1; v < m; ++v) cap[u * m + v] = instance.opt_cost_edge(u, v) * scale;
  }
  const auto in = membership(result, m);

  for (const auto& ev : result.events) {
    const auto sets = growing(ev);
    const std::size_t arrived = ev.potential.size();
    for (RequestId u = 0; u < arrived; ++u) {
      for (RequestId v = u + 1; v < arrived; ++v) {
        Rational load = 0;
        for (SetId s : sets) {
          if (in[s][u] != in[s][v]) load += ev.growth[s];
        }
        const Rational margin = cap[u * m + v] - result.rate * load;
        ++report.checks;
        if (!report.worst_slack || margin < *report.worst_slack) report.worst_slack = margin;
        if (margin < 0) {
          report.fail("pair " + pair_name(u, v) + " over capacity by " + (-margin).str() +
                      " at time " + ev.time.str());
        }
      }
    }
  }
  return report;
}

AuditReport audit_potential_identity(const RunResult& result, const Instance& instance) {
  require_full_trace(result, "audit_potential_identity");
  AuditReport report;
  report.name = "potential_identity";
  const auto in = membership(result, instance.m());
  for (const auto& ev : result.events) {
    const auto sets = growing(ev);
    for (RequestId u = 0; u < ev.potential.size(); ++u) {
      Rational chain = 0;
      for (SetId s : sets) {
        if (in[s][u]) chain += ev.growth[s];
      }
      const Rational elapsed = ev.time - instance.request(u).atime;
      ++report.checks;
      if (chain != ev.potential[u]) {
        report.fail("request " + std::to_string(u) + ": engine potential " +
                    ev.potential[u].str() + " != set-history sum " + chain.str() + " at time " +
                    ev.time.str());
      }
      if (!ev.matched[u] && chain != elapsed) {
        report.fail("unmatched request " + std::to_string(u) + ": potential " + chain.str() +
                    " != elapsed " + elapsed.str() + " at time " + ev.time.str());
      }
      if (ev.matched[u] && chain > elapsed) {
        report.fail("matched request " + std::to_string(u) + ": potential " + chain.str() +
                    " > elapsed " + elapsed.str() + " at time " + ev.time.str());
      }
    }
  }
  return report;
}

AuditReport audit_spanning_forest(const RunResult& result) {
  AuditReport report;
  report.name = "spanning_forest";
  std::size_t m = 0;
  for (const auto& s : result.sets) {
    if (!s.members.empty()) m = std::max(m, s.members.back() + 1);
  }
  const auto in = membership(result, m);

  std::vector<std::vector<MarkedEdge>> internal(result.sets.size());
  for (const auto& s : result.sets) {
    for (const auto& e : result.marked) {
      if (in[s.id][e.u] && in[s.id][e.v]) internal[s.id].push_back(e);
    }
    ++report.checks;
    if (internal[s.id].size() + 1 != s.members.size()) {
      report.fail("set " + std::to_string(s.id) + " has " + std::to_string(internal[s.id].size()) +
                  " internal marked edges for " + std::to_string(s.members.size()) + " members");
      continue;
    }
    UnionFind uf(m);
    std::size_t joined = 0;
    for (const auto& e : internal[s.id]) joined += uf.unite(e.u, e.v) ? 1 : 0;
    if (joined + 1 != s.members.size()) {
      report.fail("marked edges of set " + std::to_string(s.id) + " contain a cycle");
    }
  }

  // Path-crossing bound for every group.
  for (std::size_t gi = 0; gi < result.groups.size(); ++gi) {
    const auto& g = result.groups[gi];
    const auto& tree = internal[g.source];
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      for (std::size_t j = i + 1; j < g.members.size(); ++j) {
        const auto path = tree_path(tree, g.members[i], g.members[j], m);
        if (path.empty()) {
          report.fail("group " + std::to_string(gi) + ": no tree path " +
                      pair_name(g.members[i], g.members[j]));
          continue;
        }
        for (const auto& other : result.sets) {
          if (other.birth > g.time) continue;
          const auto crossings = std::count_if(path.begin(), path.end(), [&](const MarkedEdge& e) {
            return in[other.id][e.u] != in[other.id][e.v];
          });
          ++report.checks;
          if (crossings > 2) {
            report.fail("group " + std::to_string(gi) + ": path " +
                        pair_name(g.members[i], g.members[j]) + " crosses set " +
                        std::to_string(other.id) + " " + std::to_string(crossings) + " times");
          }
        }
      }
    }
  }
  return report;
}

AuditReport audit_cost_accounting(const RunResult& result, const Instance& instance) {
  if (!result.default_rate) {
    throw std::invalid_argument("cost accounting bounds hold only at the default rate 1/(gamma k^2)");
  }
  AuditReport report;
  report.name = "cost_accounting";
  const auto k = static_cast<std::size_t>(result.k);
  const Rational m = instance.m();
  const Rational kk = result.k;

  Rational weighted_growth = 0;
  Rational dual = 0;
  for (const auto& s : result.sets) {
    const auto sur = surplus(s.members.size(), result.k);
    weighted_growth += Rational(sur) * s.growth;
    dual += Rational(sur * (k - sur)) * result.rate * s.growth;
  }
  Rational waiting = 0;
  Rational distance = 0;
  for (const auto& g : result.groups) {
    for (RequestId u : g.members) waiting += g.time - instance.request(u).atime;
    std::vector<PointId> positions;
    for (RequestId u : g.members) positions.push_back(instance.request(u).pos);
    distance += instance.space().k_distance(positions);
  }
  const Rational alg = distance + waiting;

  auto check = [&](bool ok, const std::string& what) {
    ++report.checks;
    if (!ok) report.fail(what);
  };
  check(waiting == result.waiting_cost,
        "recomputed waiting " + waiting.str() + " != reported " + result.waiting_cost.str());
  check(alg == result.total_cost,
        "recomputed ALG " + alg.str() + " != reported " + result.total_cost.str());
  check(waiting == weighted_growth,
        "waiting " + waiting.str() + " != sum sur(S) g_S = " + weighted_growth.str());
  check(dual == result.dual_objective,
        "recomputed D' " + dual.str() + " != reported " + result.dual_objective.str());

  const Rational general = (Rational(4) * m * kk + kk * kk) * instance.space().gamma() * dual;
  check(alg <= general, "ALG " + alg.str() + " > (4mk+k^2) gamma D' = " + general.str());
  report.notes.push_back("ALG = " + alg.str() + ", D' = " + dual.str() +
                         ", (4mk+k^2) gamma D' = " + general.str());
  if (instance.space().kind() != MetricKind::dhc_over_base) {
    const Rational diameter = (Rational(4) * m + kk * kk) * dual;
    check(alg <= diameter, "ALG " + alg.str() + " > (4m+k^2) D' = " + diameter.str());
    report.notes.push_back("(4m+k^2) D' = " + diameter.str());
  }
  return report;
}

AuditReport audit_matching(const RunResult& result, const Instance& instance) {
  AuditReport report;
  report.name = "matching";
  const std::size_t m = instance.m();
  std::vector<int> cover(m, 0);
  for (std::size_t gi = 0; gi < result.groups.size(); ++gi) {
    const auto& g = result.groups[gi];
    ++report.checks;
    if (g.members.size() != static_cast<std::size_t>(result.k)) {
      report.fail("group " + std::to_string(gi) + " has " + std::to_string(g.members.size()) +
                  " members");
    }
    Rational waiting = 0;
    for (RequestId u : g.members) {
      ++cover[u];
      if (instance.request(u).atime > g.time) {
        report.fail("request " + std::to_string(u) + " matched before it arrived");
      }
      waiting += g.time - instance.request(u).atime;
    }
    if (waiting != g.waiting) report.fail("group " + std::to_string(gi) + " waiting mismatch");
  }
  for (RequestId u = 0; u < m; ++u) {
    ++report.checks;
    if (cover[u] != 1) {
      report.fail("request " + std::to_string(u) + " covered " + std::to_string(cover[u]) +
                  " times");
    }
  }
  return report;
}

}  // namespace kmpmd
