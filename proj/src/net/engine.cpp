#include "haven/net/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace haven::net {

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::EdgeLocal: return "EdgeLocal";
    case Tier::RegionalV2X: return "RegionalV2X";
    case Tier::GlobalWAN: return "GlobalWAN";
  }
  return "?";
}

Tier tier_from_string(std::string_view s) {
  for (auto t : {Tier::EdgeLocal, Tier::RegionalV2X, Tier::GlobalWAN}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown tier: " + std::string(s));
}

ChannelModel ChannelModel::defaults(Tier t) {
  switch (t) {
    case Tier::EdgeLocal: return {t, 5.0, 0.1, 0.0};
    case Tier::RegionalV2X: return {t, 100.0, 0.1, 0.0};
    case Tier::GlobalWAN: return {t, 200.0, 0.1, 0.0};
  }
  return {};
}

void ChannelModel::validate() const {
  if (!(base_latency_ms >= 0.0) || !std::isfinite(base_latency_ms)) throw std::invalid_argument("channel: base latency must be >= 0");
  if (!(jitter_fraction >= 0.0) || jitter_fraction > 1.0) throw std::invalid_argument("channel: jitter_fraction must lie in [0, 1]");
  if (!(loss_probability >= 0.0 && loss_probability <= 1.0)) throw std::invalid_argument("channel: loss_probability must lie in [0, 1]");
}

std::uint64_t Engine::push(SimTimeMs at, Handler h, std::string_view kind, std::uint64_t src, std::uint64_t dst,
                           bool msg) {
  const auto seq = next_seq_++;
  queue_.push(Event{at, seq, std::move(h), std::string(kind), src, dst, msg});
  return seq;
}

void Engine::record(SimTimeMs t, std::string_view kind, std::uint64_t src, std::uint64_t dst, std::string_view outcome) {
  if (record_trace_) trace_.push_back({t, std::string(kind), src, dst, std::string(outcome)});
}

std::uint64_t Engine::schedule(SimTimeMs delay_ms, Handler handler, std::string_view kind) {
  if (delay_ms < 0) throw std::invalid_argument("schedule: negative delay");
  return push(now_ + delay_ms, std::move(handler), kind, 0, 0, false);
}

std::uint64_t Engine::schedule_at(SimTimeMs at_ms, Handler handler, std::string_view kind) {
  if (at_ms < now_) throw std::invalid_argument("schedule_at: time is in the past");
  return push(at_ms, std::move(handler), kind, 0, 0, false);
}

std::pair<double, double> Engine::jam_effect(Tier tier, const Envelope& env) const {
  double loss = 0.0, delay = 0.0;
  for (const auto& j : jams_) {
    if (now_ < j.start_ms || now_ >= j.end_ms) continue;
    if (j.selector.tier && *j.selector.tier != tier) continue;
    if (j.selector.region && (!env.region || *env.region != *j.selector.region)) continue;
    if (!j.selector.vehicles.empty() && (!env.vehicle || !j.selector.vehicles.contains(*env.vehicle))) continue;
    loss = std::max(loss, j.loss_boost);
    delay = std::max(delay, j.delay_boost_ms);
  }
  return {loss, delay};
}

Delivery Engine::deliver(const ChannelModel& channel, const Envelope& env, Handler on_arrival, Rng& rng) {
  ++counters_.sent;
  record(now_, env.kind, env.src, env.dst, "sent");
  const auto [boost, extra_delay] = jam_effect(channel.tier, env);
  const double loss = channel.loss_probability + (1.0 - channel.loss_probability) * boost;
  // Both draws are always taken so the stream does not depend on the outcome.
  const double u_loss = rng.uniform();
  const double u_jit = rng.uniform(-1.0, 1.0);
  if (u_loss < loss) {
    ++counters_.dropped;
    record(now_, env.kind, env.src, env.dst, "dropped");
    return {};
  }
  const double latency = channel.base_latency_ms * (1.0 + channel.jitter_fraction * u_jit) + extra_delay;
  const auto delay = std::max<SimTimeMs>(0, std::llround(latency));
  Delivery d;
  d.delivered = true;
  d.arrival_ms = now_ + delay;
  d.event_id = push(d.arrival_ms, std::move(on_arrival), env.kind, env.src, env.dst, true);
  return d;
}

bool Engine::step() {
  // top() is const, so the event is copied out before popping.
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.at;
  ++counters_.dispatched;
  if (ev.is_message) ++counters_.delivered;
  record(now_, ev.kind, ev.src, ev.dst, ev.is_message ? "delivered" : "fired");
  if (ev.handler) ev.handler();
  return true;
}

std::size_t Engine::run_until(SimTimeMs t_end) {
  if (t_end < now_) throw std::invalid_argument("run_until: end time precedes the clock");
  std::size_t n = 0;
  while (!queue_.empty() && queue_.top().at <= t_end) {
    step();
    ++n;
  }
  now_ = t_end;
  return n;
}

std::size_t Engine::run() {
  std::size_t n = 0;
  while (!queue_.empty()) {
    step();
    ++n;
  }
  return n;
}

void Engine::apply_jam(const JamWindow& jam) {
  if (!(jam.start_ms < jam.end_ms)) throw std::invalid_argument("apply_jam: start must precede end");
  if (!(jam.loss_boost >= 0.0 && jam.loss_boost <= 1.0)) throw std::invalid_argument("apply_jam: loss_boost must lie in [0, 1]");
  if (!(jam.delay_boost_ms >= 0.0)) throw std::invalid_argument("apply_jam: delay_boost_ms must be >= 0");
  jams_.push_back(jam);
}

JamWindow Engine::apply_jam(const sensors::AttackScenario& scenario, JamSelector selector, double loss_boost,
                            double delay_boost_ms) {
  if (scenario.kind != sensors::AttackKind::CommJam) throw std::invalid_argument("apply_jam: scenario is not CommJam");
  selector.vehicles.insert(scenario.target_vehicles.begin(), scenario.target_vehicles.end());
  JamWindow jam{std::move(selector), scenario.start_ms, scenario.end_ms, loss_boost, delay_boost_ms};
  apply_jam(jam);
  return jam;
}

void Engine::write_trace_jsonl(std::ostream& os) const {
  for (const auto& r : trace_) {
    nlohmann::json j{{"time_ms", r.time_ms}, {"kind", r.kind}, {"src", r.src}, {"dst", r.dst}, {"outcome", r.outcome}};
    os << j.dump() << '\n';
  }
}

}  // namespace haven::net
