#include "haven/chain/pbft.hpp"

#include <algorithm>
#include <stdexcept>

namespace haven::chain {

std::string_view to_string(FaultMode m) {
  switch (m) {
    case FaultMode::Honest: return "Honest";
    case FaultMode::Crashed: return "Crashed";
    case FaultMode::Byzantine: return "Byzantine";
  }
  return "?";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::PrePrepared: return "PrePrepared";
    case Phase::Prepared: return "Prepared";
    case Phase::Committed: return "Committed";
  }
  return "?";
}

std::vector<ValidatorState> make_validators(std::size_t n, std::size_t crashed, std::size_t byzantine) {
  if (crashed + byzantine > n) throw std::invalid_argument("make_validators: more faulty nodes than validators");
  std::vector<ValidatorState> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i].node_id = static_cast<NodeId>(i);
  // Faults are placed at the tail so the view-0 proposer stays honest.
  for (std::size_t i = 0; i < crashed; ++i) v[n - 1 - i].fault_mode = FaultMode::Crashed;
  for (std::size_t i = 0; i < byzantine; ++i) v[n - 1 - crashed - i].fault_mode = FaultMode::Byzantine;
  return v;
}

std::size_t max_faults(std::size_t n) { return n == 0 ? 0 : (n - 1) / 3; }
std::size_t quorum(std::size_t n) { return n - max_faults(n); }

namespace {

Digest conflicting(const Digest& d) {
  Digest c = d;
  c[0] ^= 0x01;
  return c;
}

class Round {
 public:
  Round(std::vector<ValidatorState>& vs, const Digest& digest, std::uint64_t seq, std::uint64_t view, Rng& rng,
        const PbftConfig& cfg, net::Engine& engine)
      : vs_(vs), digest_(digest), seq_(seq), view_(view), rng_(rng), cfg_(cfg), engine_(engine),
        n_(vs.size()), q_(quorum(vs.size())) {}

  void start() {
    start_ms_ = engine_.now();
    const std::size_t p = view_ % n_;
    proposer_ = p;
    for (auto& v : vs_) {
      v.view = view_;
      v.phase = Phase::Idle;
      v.accepted.reset();
    }
    const auto& prop = vs_[p];
    if (prop.fault_mode == FaultMode::Crashed) return;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == p) continue;
      Digest d = digest_;
      if (prop.fault_mode == FaultMode::Byzantine && (k++ % 2 == 1)) d = conflicting(digest_);
      send("pre-prepare", p, j, [this, j, d] { on_pre_prepare(j, d); });
    }
    if (prop.fault_mode == FaultMode::Honest) accept(p, digest_);
    else byzantine_vote(p);
  }

  /// Ignore anything still arriving for this view.
  void close() { closed_ = true; }

  std::vector<double> prepared_at, committed_at;
  double last_pre_prepare_ms = -1.0;
  std::size_t proposer_ = 0;
  std::uint64_t messages = 0, dropped = 0;

 private:
  template <class F>
  void send(const char* kind, std::size_t src, std::size_t dst, F&& on_arrival) {
    ++messages;
    net::Envelope env{kind, vs_[src].node_id, vs_[dst].node_id, std::nullopt, std::nullopt};
    const auto d = engine_.deliver(cfg_.channel, env, std::forward<F>(on_arrival), rng_);
    if (!d.delivered) ++dropped;
  }

  bool live(std::size_t i) const { return !closed_ && vs_[i].fault_mode != FaultMode::Crashed; }

  void on_pre_prepare(std::size_t i, const Digest& d) {
    if (!live(i)) return;
    last_pre_prepare_ms = std::max(last_pre_prepare_ms, static_cast<double>(engine_.now() - start_ms_));
    if (vs_[i].fault_mode == FaultMode::Byzantine) {
      byzantine_vote(i);
      return;
    }
    if (vs_[i].accepted) return;
    accept(i, d);
  }

  void accept(std::size_t i, const Digest& d) {
    auto& v = vs_[i];
    v.accepted = d;
    v.phase = Phase::PrePrepared;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      send("prepare", i, j, [this, j, d] { on_prepare(j, d); });
    }
    on_prepare(i, d);
  }

  // Equivocation: prepare and commit for the real digest to even-ranked
  // peers, for a conflicting digest to the rest. Sent once per view.
  void byzantine_vote(std::size_t i) {
    if (vs_[i].accepted) return;
    vs_[i].accepted = digest_;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const Digest d = (k++ % 2 == 0) ? digest_ : conflicting(digest_);
      send("prepare", i, j, [this, j, d] { on_prepare(j, d); });
      send("commit", i, j, [this, j, d] { on_commit(j, d); });
    }
  }

  VoteLog& log(std::size_t i) { return vs_[i].message_log[{view_, seq_}]; }

  void on_prepare(std::size_t i, const Digest& d) {
    if (!live(i) || vs_[i].fault_mode == FaultMode::Byzantine) return;
    auto& v = vs_[i];
    const auto votes = ++log(i).prepares[d];
    if (v.phase == Phase::PrePrepared && v.accepted == d && votes >= q_) {
      v.phase = Phase::Prepared;
      prepared_at.push_back(static_cast<double>(engine_.now() - start_ms_));
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        send("commit", i, j, [this, j, d] { on_commit(j, d); });
      }
      on_commit(i, d);
    }
  }

  void on_commit(std::size_t i, const Digest& d) {
    if (!live(i) || vs_[i].fault_mode == FaultMode::Byzantine) return;
    auto& v = vs_[i];
    const auto votes = ++log(i).commits[d];
    // A node can collect commits before it has prepared; re-checked on each vote.
    if (v.phase == Phase::Prepared && v.accepted == d && votes >= q_) {
      v.phase = Phase::Committed;
      v.committed = d;
      committed_at.push_back(static_cast<double>(engine_.now() - start_ms_));
    }
  }

  std::vector<ValidatorState>& vs_;
  Digest digest_;
  std::uint64_t seq_, view_;
  Rng& rng_;
  const PbftConfig& cfg_;
  net::Engine& engine_;
  std::size_t n_, q_;
  SimTimeMs start_ms_ = 0;
  bool closed_ = false;
};

}  // namespace

PbftOutcome pbft_round(std::vector<ValidatorState>& validators, const Digest& block_hash, std::uint64_t sequence,
                       Rng& rng, const PbftConfig& cfg) {
  if (validators.empty()) throw std::invalid_argument("pbft_round: empty validator set");
  cfg.channel.validate();
  for (auto& v : validators) v.committed.reset();

  PbftOutcome out;
  net::Engine engine;
  const std::uint64_t first_view = validators.front().view;
  const std::size_t attempts = cfg.view_change ? max_faults(validators.size()) + 1 : 1;
  double elapsed_before = 0.0;
  for (std::size_t a = 0; a < attempts; ++a) {
    const std::uint64_t view = first_view + static_cast<std::uint64_t>(a);
    Round r(validators, block_hash, sequence, view, rng, cfg, engine);
    const SimTimeMs t0 = engine.now();
    r.start();
    engine.run_until(t0 + cfg.view_timeout_ms);
    out.messages += r.messages;
    out.dropped += r.dropped;
    out.view = view;
    out.proposer = validators[r.proposer_].node_id;

    bool any = false;
    for (const auto& v : validators) {
      if (v.fault_mode == FaultMode::Honest && v.committed) any = true;
    }
    if (any) {
      out.committed = true;
      out.digest = block_hash;
      auto max_of = [](const std::vector<double>& xs) { return xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end()); };
      const double pre = std::max(0.0, r.last_pre_prepare_ms);
      const double prepared = max_of(r.prepared_at);
      const double committed = max_of(r.committed_at);
      out.timing.t_network_ms = elapsed_before + pre;
      out.timing.t_prepare_ms = std::max(0.0, prepared - pre);
      out.timing.t_commit_ms = std::max(0.0, committed - prepared);
      break;
    }
    elapsed_before += static_cast<double>(cfg.view_timeout_ms);
    r.close();
    engine.run();
  }
  if (!out.committed) out.timing.t_network_ms = elapsed_before;
  out.timing.t_consensus_ms = std::max(out.timing.t_prepare_ms, out.timing.t_commit_ms) + out.timing.t_network_ms;
  for (const auto& v : validators) {
    if (v.fault_mode == FaultMode::Honest && v.committed) out.honest_commits.emplace_back(v.node_id, *v.committed);
  }
  return out;
}

}  // namespace haven::chain
