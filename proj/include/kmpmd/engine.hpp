#pragma once

// GD-k as an exact discrete-event simulation.
//
// Every arrived request belongs to exactly one active set. Each active set
// that still holds a free request grows its dual y_S = r * g_S at rate r,
// where g_S is the set's growth duration. A cross-set pair (u, v) is tight
// when Phi(u) + Phi(v) reaches opt-cost(u, v) / (r * gamma * k^2), with
// Phi(u) the summed growth of all sets that ever contained u. Tight pairs
// merge their sets and get marked; a merged set with k or more free requests
// emits a group of the k free requests with smallest (atime, id).
//
// Time advances by exact jumps to the next arrival or the next tightening,
// so no discretisation error is involved anywhere.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kmpmd/instance.hpp"
#include "kmpmd/rational.hpp"

namespace kmpmd {

using SetId = std::size_t;

struct ActiveSetRecord {
  SetId id = 0;
  std::vector<RequestId> members;  // sorted
  std::vector<RequestId> free;     // sorted, after groups were carved
  Rational growth;                 // g_S
  Rational birth;
  std::optional<Rational> death;   // merge time, none while active
  std::optional<std::pair<SetId, SetId>> parents;

  bool active() const { return !death.has_value(); }
};

struct MarkedEdge {
  RequestId u = 0;
  RequestId v = 0;
  Rational time;
};

struct MatchedGroup {
  std::vector<RequestId> members;  // sorted
  Rational time;
  Rational distance;
  Rational waiting;
  SetId source = 0;  // set the group was carved from
};

enum class EventKind { arrival, tight };

struct EventRecord {
  EventKind kind = EventKind::arrival;
  Rational time;
  std::vector<RequestId> arrivals;
  std::vector<MarkedEdge> merges;     // edges marked at this instant, in processing order
  std::vector<std::size_t> groups;    // indices into RunResult::groups
  // Dual snapshot after the event; present at full trace level.
  std::vector<Rational> growth;       // g_S for every set created so far
  std::vector<Rational> potential;    // Phi(u) for every arrived request
  std::vector<bool> matched;          // per arrived request
};

enum class TraceLevel { summary, full };

struct EngineConfig {
  std::optional<Rational> rate_override;
  TraceLevel trace = TraceLevel::full;
};

struct RunResult {
  int k = 2;
  Rational gamma = 1;
  Rational rate;
  bool default_rate = true;
  TraceLevel trace = TraceLevel::full;

  std::vector<MatchedGroup> groups;
  Rational distance_cost;
  Rational waiting_cost;
  Rational total_cost;
  Rational dual_objective;  // sum_S sur(S)(k - sur(S)) r g_S

  std::vector<ActiveSetRecord> sets;  // full history, indexed by SetId
  std::vector<MarkedEdge> marked;
  std::vector<EventRecord> events;
};

class Engine {
 public:
  explicit Engine(const Instance& instance, EngineConfig config = {});

  bool done() const;

  // Processes one event: every arrival at the next arrival instant, or every
  // tight pair at the next tightening instant. Throws std::logic_error when
  // called on a terminal state and InvariantBreach on an internal failure.
  void step();

  // Runs to completion and returns the result.
  RunResult finish() &&;

  const Rational& now() const { return now_; }
  const Rational& rate() const { return rate_; }
  const std::vector<ActiveSetRecord>& sets() const { return sets_; }
  std::vector<SetId> active_sets() const;
  std::optional<SetId> set_of(RequestId u) const { return owner_[u]; }
  const Rational& potential(RequestId u) const { return potential_[u]; }
  bool matched(RequestId u) const { return matched_[u]; }
  std::size_t arrived() const { return next_arrival_; }
  const std::vector<MatchedGroup>& groups() const { return groups_; }
  const std::vector<EventRecord>& events() const { return events_; }

  // Phi(u) + Phi(v) for a cross-set pair, the frozen value for an internal one.
  Rational dual_load(RequestId u, RequestId v) const;
  const Rational& threshold(RequestId u, RequestId v) const { return threshold_[index(u, v)]; }
  Rational slack(RequestId u, RequestId v) const { return threshold(u, v) - dual_load(u, v); }

 private:
  std::size_t index(RequestId u, RequestId v) const { return u * m_ + v; }
  bool has_free(SetId s) const { return !sets_[s].free.empty(); }
  void advance(const Rational& delta);
  void process_arrivals();
  void process_tight();
  void merge(RequestId u, RequestId v);
  void carve(SetId s);
  void snapshot(EventRecord event);

  const Instance* instance_;
  EngineConfig config_;
  std::size_t m_;
  int k_;
  Rational rate_;
  Rational now_;
  std::size_t next_arrival_ = 0;
  std::size_t unmatched_;
  std::size_t event_guard_;
  bool overshoot_ok_ = false;

  std::vector<Rational> threshold_;  // m x m
  std::vector<Rational> frozen_;     // m x m, valid once the pair shares a set
  std::vector<std::optional<SetId>> owner_;
  std::vector<Rational> potential_;
  std::vector<bool> matched_;
  std::vector<ActiveSetRecord> sets_;
  std::vector<MarkedEdge> marked_;
  std::vector<MatchedGroup> groups_;
  std::vector<EventRecord> events_;
};

// Runs GD-k with rate 1/(gamma k^2) unless overridden.
RunResult run(const Instance& instance, EngineConfig config = {});

// sur(S) = |S| mod k.
inline std::size_t surplus(std::size_t size, int k) { return size % static_cast<std::size_t>(k); }

}  // namespace kmpmd
