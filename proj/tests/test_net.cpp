#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include "haven/common/rng.hpp"
#include "haven/net/engine.hpp"

using namespace haven;
using namespace haven::net;

TEST_CASE("events fire in (time, insertion) order") {
  Rng rng(1);
  Engine e;
  std::vector<std::pair<SimTimeMs, int>> scheduled, fired;
  for (int i = 0; i < 500; ++i) {
    const auto t = static_cast<SimTimeMs>(rng.uniform_int(0, 50));
    scheduled.emplace_back(t, i);
    e.schedule(t, [&, t, i] { fired.emplace_back(t, i); });
  }
  e.run();
  std::stable_sort(scheduled.begin(), scheduled.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  CHECK(fired == scheduled);
  CHECK_THROWS_AS(e.schedule(-1, [] {}), std::invalid_argument);
}

TEST_CASE("run_until stops at the horizon and advances the clock") {
  Engine e;
  int n = 0;
  e.schedule(10, [&] { ++n; });
  e.schedule(30, [&] { ++n; });
  CHECK(e.run_until(20) == 1);
  CHECK(e.now() == 20);
  CHECK(e.pending() == 1);
  e.run();
  CHECK(n == 2);
}

TEST_CASE("channel defaults and latency realism") {
  CHECK(ChannelModel::defaults(Tier::EdgeLocal).base_latency_ms == 5);
  CHECK(ChannelModel::defaults(Tier::RegionalV2X).base_latency_ms == 100);
  CHECK(ChannelModel::defaults(Tier::GlobalWAN).base_latency_ms == 200);
  Rng rng(2);
  Engine e;
  const auto ch = ChannelModel::defaults(Tier::RegionalV2X);
  double sum = 0;
  SimTimeMs lo = 1 << 20, hi = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto d = e.deliver(ch, {"x", 0, 1}, [] {}, rng);
    REQUIRE(d.delivered);
    sum += static_cast<double>(d.arrival_ms);
    lo = std::min(lo, d.arrival_ms);
    hi = std::max(hi, d.arrival_ms);
  }
  CHECK(sum / 5000 >= 90);
  CHECK(sum / 5000 <= 110);
  CHECK(lo >= 90);
  CHECK(hi <= 110);
}

TEST_CASE("jam drop rate matches base + (1 - base) * boost") {
  Rng rng(3);
  Engine e;
  auto ch = ChannelModel::defaults(Tier::RegionalV2X);
  ch.loss_probability = 0.1;
  JamWindow jam;
  jam.selector.tier = Tier::RegionalV2X;
  jam.selector.region = 2;
  jam.start_ms = 0;
  jam.end_ms = 1000;
  jam.loss_boost = 0.5;
  e.apply_jam(jam);
  int dropped = 0, other = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    dropped += !e.deliver(ch, {"hb", 1, 0, RegionId{2}}, [] {}, rng).delivered;
    other += !e.deliver(ch, {"hb", 1, 0, RegionId{3}}, [] {}, rng).delivered;
  }
  const double expect = 0.1 + 0.9 * 0.5;
  const double sd = std::sqrt(expect * (1 - expect) / n);
  CHECK(std::abs(dropped / double(n) - expect) < 4 * sd);
  CHECK(std::abs(other / double(n) - 0.1) < 4 * std::sqrt(0.09 / n));
  CHECK(e.counters().sent == 2 * n);
  CHECK(e.counters().dropped == static_cast<std::uint64_t>(dropped + other));
}

TEST_CASE("overlapping jams combine by maximum, and expire") {
  Engine e;
  JamWindow a;
  a.end_ms = 100;
  a.loss_boost = 0.3;
  a.delay_boost_ms = 10;
  JamWindow b = a;
  b.loss_boost = 0.6;
  b.delay_boost_ms = 5;
  e.apply_jam(a);
  e.apply_jam(b);
  auto [loss, delay] = e.jam_effect(Tier::GlobalWAN, {"x", 0, 0});
  CHECK(loss == doctest::Approx(0.6));
  CHECK(delay == doctest::Approx(10));
  e.run_until(100);
  std::tie(loss, delay) = e.jam_effect(Tier::GlobalWAN, {"x", 0, 0});
  CHECK(loss == 0);
  sensors::AttackScenario s{sensors::AttackKind::GpsSpoof, 1, 0, 10, {1}};
  CHECK_THROWS_AS(e.apply_jam(s, {}, 0.5, 0), std::invalid_argument);
}

TEST_CASE("trace records and serializes") {
  Rng rng(4);
  Engine e(true);
  e.deliver(ChannelModel::defaults(Tier::EdgeLocal), {"ping", 3, 4}, [] {}, rng);
  e.run();
  REQUIRE(e.trace().size() >= 2);
  CHECK(e.trace().front().outcome == "sent");
  std::ostringstream os;
  e.write_trace_jsonl(os);
  CHECK(os.str().find("\"ping\"") != std::string::npos);
}
