#include "kmpmd/engine.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

#include "kmpmd/errors.hpp"

namespace kmpmd {

Engine::Engine(const Instance& instance, EngineConfig config)
    : instance_(&instance),
      config_(std::move(config)),
      m_(instance.m()),
      k_(instance.k()),
      unmatched_(instance.m()),
      event_guard_(4 * instance.m()),
      threshold_(instance.m() * instance.m()),
      frozen_(instance.m() * instance.m()),
      owner_(instance.m()),
      potential_(instance.m()),
      matched_(instance.m(), false) {
  const Rational k = k_;
  const Rational dual_scale = Rational(1) / (instance.space().gamma() * k * k);
  rate_ = config_.rate_override.value_or(dual_scale);
  if (rate_ <= 0) throw std::invalid_argument("rate must be positive");
  // Above the default rate a pair can be over its threshold on arrival; it is
  // then tight immediately.
  overshoot_ok_ = rate_ > dual_scale;
  const Rational factor = dual_scale / rate_;
  for (RequestId u = 0; u < m_; ++u) {
    for (RequestId v = u + 1; v < m_; ++v) {
      threshold_[index(u, v)] = instance.opt_cost_edge(u, v) * factor;
      threshold_[index(v, u)] = threshold_[index(u, v)];
    }
  }
  if (m_ > 0) now_ = instance.request(0).atime;
}

bool Engine::done() const { return unmatched_ == 0 && next_arrival_ == m_; }

std::vector<SetId> Engine::active_sets() const {
  std::vector<SetId> out;
  for (const auto& s : sets_) {
    if (s.active()) out.push_back(s.id);
  }
  return out;
}

Rational Engine::dual_load(RequestId u, RequestId v) const {
  if (owner_[u] != owner_[v]) return potential_[u] + potential_[v];
  return frozen_[index(u, v)];
}

void Engine::step() {
  if (done()) throw std::logic_error("step called on a terminal engine state");
  if (events_.size() >= event_guard_) {
    throw InvariantBreach("event guard of " + std::to_string(event_guard_) + " exceeded");
  }

  std::optional<Rational> wait;
  for (RequestId u = 0; u < next_arrival_; ++u) {
    for (RequestId v = u + 1; v < next_arrival_; ++v) {
      if (owner_[u] == owner_[v]) continue;
      Rational s = slack(u, v);
      if (s < 0) {
        if (!overshoot_ok_) throw InvariantBreach("negative slack on a cross-set pair");
        s = 0;
      }
      const int speed = int{has_free(*owner_[u])} + int{has_free(*owner_[v])};
      if (speed == 0 && !s.is_zero()) continue;
      Rational dt = s.is_zero() ? s : s / speed;
      if (!wait || dt < *wait) wait = std::move(dt);
    }
  }

  if (next_arrival_ < m_) {
    const Rational& next = instance_->request(next_arrival_).atime;
    if (!wait || next <= now_ + *wait) {
      advance(next - now_);
      process_arrivals();
      return;
    }
  }
  if (!wait) throw InvariantBreach("unmatched requests remain but no event is pending");
  advance(*wait);
  process_tight();
}

RunResult Engine::finish() && {
  while (!done()) step();

  RunResult result;
  result.k = k_;
  result.gamma = instance_->space().gamma();
  result.rate = rate_;
  result.default_rate = !config_.rate_override.has_value() ||
                        *config_.rate_override == Rational(1) / (result.gamma * k_ * k_);
  result.trace = config_.trace;
  for (const auto& g : groups_) {
    result.distance_cost += g.distance;
    result.waiting_cost += g.waiting;
  }
  result.total_cost = result.distance_cost + result.waiting_cost;
  for (const auto& s : sets_) {
    const auto sur = surplus(s.members.size(), k_);
    result.dual_objective += Rational(sur * (static_cast<std::size_t>(k_) - sur)) * rate_ * s.growth;
  }
  result.groups = std::move(groups_);
  result.sets = std::move(sets_);
  result.marked = std::move(marked_);
  result.events = std::move(events_);
  return result;
}

void Engine::advance(const Rational& delta) {
  if (delta < 0) throw InvariantBreach("time moved backwards");
  if (delta.is_zero()) return;
  for (auto& s : sets_) {
    if (!s.active() || s.free.empty()) continue;
    s.growth += delta;
    for (RequestId u : s.members) potential_[u] += delta;
  }
  now_ += delta;
}

void Engine::process_arrivals() {
  EventRecord event;
  event.kind = EventKind::arrival;
  event.time = now_;
  while (next_arrival_ < m_ && instance_->request(next_arrival_).atime == now_) {
    const RequestId v = next_arrival_++;
    ActiveSetRecord s;
    s.id = sets_.size();
    s.members = {v};
    s.free = {v};
    s.birth = now_;
    owner_[v] = s.id;
    sets_.push_back(std::move(s));
    event.arrivals.push_back(v);
  }
  snapshot(std::move(event));
}

void Engine::process_tight() {
  EventRecord event;
  event.kind = EventKind::tight;
  event.time = now_;
  std::vector<std::pair<RequestId, RequestId>> tight;
  for (RequestId u = 0; u < next_arrival_; ++u) {
    for (RequestId v = u + 1; v < next_arrival_; ++v) {
      if (owner_[u] == owner_[v]) continue;
      const int sign = slack(u, v).sign();
      if (sign == 0 || (sign < 0 && overshoot_ok_)) tight.emplace_back(u, v);
    }
  }
  if (tight.empty()) throw InvariantBreach("tightening event without a tight pair");
  for (const auto& [u, v] : tight) {
    if (owner_[u] == owner_[v]) continue;
    const std::size_t before = groups_.size();
    merge(u, v);
    event.merges.push_back(marked_.back());
    for (std::size_t g = before; g < groups_.size(); ++g) event.groups.push_back(g);
  }
  snapshot(std::move(event));
}

void Engine::merge(RequestId u, RequestId v) {
  const SetId a = *owner_[u];
  const SetId b = *owner_[v];
  for (RequestId x : sets_[a].members) {
    for (RequestId y : sets_[b].members) {
      frozen_[index(x, y)] = potential_[x] + potential_[y];
      frozen_[index(y, x)] = frozen_[index(x, y)];
    }
  }

  ActiveSetRecord s;
  s.id = sets_.size();
  std::merge(sets_[a].members.begin(), sets_[a].members.end(), sets_[b].members.begin(),
             sets_[b].members.end(), std::back_inserter(s.members));
  std::merge(sets_[a].free.begin(), sets_[a].free.end(), sets_[b].free.begin(),
             sets_[b].free.end(), std::back_inserter(s.free));
  s.birth = now_;
  s.parents = std::make_pair(a, b);
  sets_[a].death = now_;
  sets_[b].death = now_;
  for (RequestId x : s.members) owner_[x] = s.id;
  marked_.push_back({std::min(u, v), std::max(u, v), now_});
  sets_.push_back(std::move(s));
  carve(sets_.back().id);
}

// Ids follow arrival order and arrival times never decrease, so the k free
// requests with smallest (atime, id) are the k smallest ids.
void Engine::carve(SetId id) {
  const auto k = static_cast<std::size_t>(k_);
  while (sets_[id].free.size() >= k) {
    auto& free = sets_[id].free;
    MatchedGroup g;
    g.members.assign(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(k));
    free.erase(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(k));
    g.time = now_;
    g.source = id;
    std::vector<PointId> positions;
    for (RequestId u : g.members) {
      positions.push_back(instance_->request(u).pos);
      g.waiting += now_ - instance_->request(u).atime;
      matched_[u] = true;
    }
    g.distance = instance_->space().k_distance(positions);
    unmatched_ -= k;
    groups_.push_back(std::move(g));
  }
}

void Engine::snapshot(EventRecord event) {
  if (config_.trace == TraceLevel::full) {
    event.growth.reserve(sets_.size());
    for (const auto& s : sets_) event.growth.push_back(s.growth);
    event.potential.assign(potential_.begin(),
                           potential_.begin() + static_cast<std::ptrdiff_t>(next_arrival_));
    event.matched.assign(matched_.begin(),
                         matched_.begin() + static_cast<std::ptrdiff_t>(next_arrival_));
  }
  events_.push_back(std::move(event));
}

RunResult run(const Instance& instance, EngineConfig config) {
  return Engine(instance, std::move(config)).finish();
}

}  // namespace kmpmd
