#include <doctest.h>

#include <set>
#include <sstream>

#include "haven/chain/block.hpp"
#include "haven/chain/pbft.hpp"
#include "haven/chain/registry.hpp"
#include "haven/chain/selective_log.hpp"
#include "haven/common/digest.hpp"
#include "haven/common/rng.hpp"

using namespace haven;
using namespace haven::chain;

namespace {

ThreatEvent make_event(std::uint32_t i, double severity = 0.9) {
  ThreatEvent e;
  e.signature.digest[0] = static_cast<std::uint8_t>(i);
  e.signature.digest[1] = static_cast<std::uint8_t>(i >> 8);
  e.signature.vehicle_id = i;
  e.signature.threat_level = edge::threat_level_for(severity);
  e.signature.attack_class = edge::ThreatClass::LidarSpoof;
  e.severity = severity;
  e.observed_at_ms = 100 * i;
  return e;
}

std::vector<Block> build_chain(std::size_t events, std::size_t batch) {
  std::vector<ThreatEvent> pending;
  for (std::uint32_t i = 0; i < events; ++i) pending.push_back(make_event(i));
  std::vector<Block> chain;
  while (!pending.empty())
    chain.push_back(assemble_block(pending, chain.empty() ? nullptr : &chain.back(), 1, 1000 * chain.size(), batch));
  return chain;
}

}  // namespace

TEST_CASE("should_log is a strict OR over three clauses") {
  FilterConfig cfg;
  ThreatEvent e;
  CHECK_FALSE(should_log(e, cfg));
  e.severity = 0.85;
  CHECK_FALSE(should_log(e, cfg));
  e.severity = 0.850001;
  CHECK(should_log(e, cfg));
  e.severity = 0;
  e.cross_regional_frequency = 3;
  CHECK_FALSE(should_log(e, cfg));
  e.cross_regional_frequency = 4;
  CHECK(should_log(e, cfg));
  e.cross_regional_frequency = 0;
  e.consensus_confidence = 0.9;
  CHECK_FALSE(should_log(e, cfg));
  e.consensus_confidence = 0.91;
  CHECK(should_log(e, cfg));
}

TEST_CASE("cross-region registry counts distinct regions inside the window") {
  CrossRegionRegistry reg(1000);
  edge::ThreatSignature s;
  s.attack_class = edge::ThreatClass::GpsSpoof;
  s.pattern_key = edge::pattern_key_for(s.attack_class, 0.9);
  CHECK(reg.track(s, 0, 0) == 1);
  CHECK(reg.track(s, 0, 10) == 1);
  CHECK(reg.track(s, 1, 20) == 2);
  CHECK(reg.track(s, 2, 900) == 3);
  CHECK(reg.frequency(s, 1005) == 3);  // the report at 10 is still inside
  CHECK(reg.frequency(s, 1011) == 2);
  CHECK(reg.frequency(s, 1021) == 1);
  auto other = s;
  other.attack_class = edge::ThreatClass::CameraPatch;
  CHECK(reg.frequency(other, 1021) == 0);
}

TEST_CASE("storage_stats") {
  CHECK(storage_stats(100, 5) == doctest::Approx(0.05));
  CHECK_THROWS(storage_stats(0, 0));
  CHECK_THROWS(storage_stats(3, 4));
}

TEST_CASE("batching yields ceil(n / batch) linked blocks") {
  for (std::size_t n : {1u, 5u, 6u, 45u, 47u}) {
    const auto chain = build_chain(n, 5);
    CHECK(chain.size() == (n + 4) / 5);
    CHECK(verify_chain(chain));
    for (std::size_t i = 1; i < chain.size(); ++i) {
      CHECK(chain[i].prev_hash == chain[i - 1].block_hash);
      CHECK(chain[i].index == i);
    }
    CHECK(chain.front().prev_hash == Digest{});
  }
  std::vector<ThreatEvent> empty;
  CHECK_THROWS_AS(assemble_block(empty, nullptr, 0, 0), std::invalid_argument);
}

TEST_CASE("tampering breaks verification") {
  const auto good = build_chain(20, 5);
  auto c = good;
  c[1].transactions[2].severity = 0.91;
  CHECK_FALSE(verify_chain(c));
  c = good;
  c[2].timestamp_ms += 1;
  CHECK_FALSE(verify_chain(c));
  c = good;
  std::swap(c[1], c[2]);
  CHECK_FALSE(verify_chain(c));
  c = good;
  c.erase(c.begin() + 1);
  CHECK_FALSE(verify_chain(c));
  c = good;
  c[3].transactions.pop_back();
  CHECK_FALSE(verify_chain(c));
}

TEST_CASE("ledger export writes one line per block") {
  const auto chain = build_chain(12, 5);
  std::ostringstream os;
  export_ledger_jsonl(chain, os);
  const auto s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
  CHECK(s.find(to_hex(chain[0].block_hash)) != std::string::npos);
}

TEST_CASE("registry raises alerts for High transactions once per block") {
  std::vector<ThreatEvent> pending{make_event(1, 0.9), make_event(2, 0.75), make_event(3, 0.95)};
  const auto b = assemble_block(pending, nullptr, 0, 0);
  ThreatRegistry reg;
  const auto d = reg.apply(b);
  CHECK(d.size() == 2);
  CHECK(d[0].action == "region_alert");
  CHECK(reg.apply(b).empty());
  CHECK(reg.blocks_applied() == 1);
}

TEST_CASE("quorum arithmetic") {
  for (std::size_t n = 1; n <= 30; ++n) {
    const std::size_t f = (n - 1) / 3;
    CHECK(max_faults(n) == f);
    CHECK(quorum(n) == n - f);
    // Any two quorums share an honest node.
    CHECK(2 * quorum(n) - n >= f + 1);
  }
}

TEST_CASE("PBFT message count follows the three-phase formula") {
  // Pre-prepare n-1, then every node broadcasts one prepare and one commit.
  Rng rng(3);
  for (std::size_t n : {4u, 7u, 10u}) {
    auto vs = make_validators(n);
    const auto out = pbft_round(vs, Digest{}, 0, rng);
    CHECK(out.committed);
    CHECK(out.messages == (n - 1) + 2 * n * (n - 1));
  }
}

TEST_CASE("PBFT safety and liveness under random faults") {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(4, 13));
    const auto f = max_faults(n);
    const auto byz = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(f)));
    auto vs = make_validators(n, f - byz, byz);
    std::shuffle(vs.begin(), vs.end(), rng.engine());
    Digest d{};
    d[0] = static_cast<std::uint8_t>(t);
    const auto out = pbft_round(vs, d, static_cast<std::uint64_t>(t), rng);
    CHECK(out.committed);
    std::set<Digest> seen;
    for (const auto& [node, dig] : out.honest_commits) seen.insert(dig);
    CHECK(seen.size() == 1);
    CHECK(*seen.begin() == d);
  }
}

TEST_CASE("PBFT halts with f+1 crashed validators") {
  Rng rng(5);
  for (std::size_t n = 4; n <= 13; ++n) {
    auto vs = make_validators(n, max_faults(n) + 1);
    const auto out = pbft_round(vs, Digest{}, 0, rng);
    CHECK_FALSE(out.committed);
    CHECK(out.honest_commits.empty());
  }
}

TEST_CASE("PBFT timing components") {
  Rng rng(6);
  auto vs = make_validators(7);
  const auto out = pbft_round(vs, Digest{}, 0, rng);
  REQUIRE(out.committed);
  CHECK(out.timing.t_network_ms >= 90.0);
  CHECK(out.timing.t_network_ms <= 220.0);
  CHECK(out.timing.t_consensus_ms ==
        doctest::Approx(std::max(out.timing.t_prepare_ms, out.timing.t_commit_ms) + out.timing.t_network_ms));
}
