#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "haven/common/rng.hpp"
#include "haven/common/types.hpp"
#include "haven/sensors/feature.hpp"

namespace haven::net {

enum class Tier : std::uint8_t { EdgeLocal, RegionalV2X, GlobalWAN };

std::string_view to_string(Tier t);
Tier tier_from_string(std::string_view s);

struct ChannelModel {
  Tier tier = Tier::RegionalV2X;
  double base_latency_ms = 100.0;
  double jitter_fraction = 0.1;
  double loss_probability = 0.0;

  /// 5 / 100 / 200 ms for edge, regional V2X and global WAN.
  static ChannelModel defaults(Tier t);
  void validate() const;
};

/// Which traffic a jam affects. Unset fields match everything.
struct JamSelector {
  std::optional<Tier> tier;
  std::optional<RegionId> region;
  std::set<VehicleId> vehicles;
};

struct JamWindow {
  JamSelector selector;
  SimTimeMs start_ms = 0;
  SimTimeMs end_ms = 0;
  double loss_boost = 0.0;
  double delay_boost_ms = 0.0;
};

/// Addressing and labels for one message; used for jam matching and tracing.
struct Envelope {
  std::string kind;
  std::uint64_t src = 0;
  std::uint64_t dst = 0;
  std::optional<RegionId> region;
  std::optional<VehicleId> vehicle;
};

struct TraceRecord {
  SimTimeMs time_ms = 0;
  std::string kind;
  std::uint64_t src = 0;
  std::uint64_t dst = 0;
  std::string outcome;  // "sent", "dropped", "delivered", "fired"

  bool operator==(const TraceRecord&) const = default;
};

struct Delivery {
  bool delivered = false;
  SimTimeMs arrival_ms = 0;
  std::uint64_t event_id = 0;
};

struct EngineCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dispatched = 0;
};

/// Single-threaded discrete-event engine on integer milliseconds. Events
/// fire in (time, sequence) order.
class Engine {
 public:
  using Handler = std::function<void()>;

  explicit Engine(bool record_trace = false) : record_trace_(record_trace) {}

  SimTimeMs now() const { return now_; }

  /// Throws std::invalid_argument for a negative delay.
  std::uint64_t schedule(SimTimeMs delay_ms, Handler handler, std::string_view kind = "timer");
  std::uint64_t schedule_at(SimTimeMs at_ms, Handler handler, std::string_view kind = "timer");

  /// Sample loss and latency for `channel` (plus any matching jam); on
  /// arrival `on_arrival` runs.
  Delivery deliver(const ChannelModel& channel, const Envelope& env, Handler on_arrival, Rng& rng);

  /// Dispatch every event with fire time <= t_end; the clock ends at t_end.
  std::size_t run_until(SimTimeMs t_end);
  /// Dispatch until the queue is empty.
  std::size_t run();

  void apply_jam(const JamWindow& jam);
  /// Registers a CommJam scenario against `selector` (its target vehicles are
  /// added). Throws std::invalid_argument for other kinds.
  JamWindow apply_jam(const sensors::AttackScenario& scenario, JamSelector selector, double loss_boost,
                      double delay_boost_ms);
  const std::vector<JamWindow>& jams() const { return jams_; }

  /// Combined loss probability and extra delay for a message sent now.
  std::pair<double, double> jam_effect(Tier tier, const Envelope& env) const;

  const EngineCounters& counters() const { return counters_; }
  std::size_t pending() const { return queue_.size(); }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  void write_trace_jsonl(std::ostream& os) const;

 private:
  struct Event {
    SimTimeMs at;
    std::uint64_t seq;
    Handler handler;
    std::string kind;
    std::uint64_t src, dst;
    bool is_message;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return a.at != b.at ? a.at > b.at : a.seq > b.seq; }
  };

  std::uint64_t push(SimTimeMs at, Handler h, std::string_view kind, std::uint64_t src, std::uint64_t dst, bool msg);
  void record(SimTimeMs t, std::string_view kind, std::uint64_t src, std::uint64_t dst, std::string_view outcome);
  bool step();

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SimTimeMs now_ = 0;
  std::uint64_t next_seq_ = 0;
  bool record_trace_;
  std::vector<TraceRecord> trace_;
  std::vector<JamWindow> jams_;
  EngineCounters counters_;
};

}  // namespace haven::net
