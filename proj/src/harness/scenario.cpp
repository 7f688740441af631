#include "haven/harness/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>

#include "haven/chain/pbft.hpp"
#include "haven/chain/selective_log.hpp"
#include "haven/common/rng.hpp"
#include "haven/edge/threat.hpp"
#include "haven/edge/window_features.hpp"
#include "haven/fed/aggregator.hpp"
#include "haven/fed/byzantine.hpp"
#include "haven/fed/local_train.hpp"
#include "haven/sensors/attack.hpp"
#include "haven/sensors/corpus.hpp"
#include "haven/sensors/generator.hpp"

namespace haven::harness {

namespace {

// Sub-stream tags for derive_seed.
constexpr std::uint64_t kTagBootstrap = 0xB0;
constexpr std::uint64_t kTagPlan = 0xA1;
constexpr std::uint64_t kTagProfile = 0xA2;
constexpr std::uint64_t kTagNet = 0xA3;
constexpr std::uint64_t kTagFed = 0xA4;
constexpr std::uint64_t kTagPbft = 0xA5;
constexpr std::uint64_t kTagByzantine = 0xA6;

// Heartbeats for window k are checked this long after the window closes.
constexpr SimTimeMs kJamCheckDelayMs = 300;
// Simulated time allowed after the horizon for in-flight work to settle.
constexpr SimTimeMs kDrainMs = 10'000;

SimTimeMs window_ms(const ScenarioConfig& cfg) {
  return static_cast<SimTimeMs>(cfg.window_length) * sensors::DriveProfile{}.sample_period_ms;
}

SimTimeMs horizon_ms(const ScenarioConfig& cfg) { return std::llround(cfg.duration_s * 1000.0); }

sensors::AttackKind draw_kind(const std::map<sensors::AttackKind, double>& mix, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  sensors::AttackKind last = mix.begin()->first;
  for (const auto& [k, f] : mix) {
    if (f <= 0.0) continue;
    acc += f;
    last = k;
    if (u < acc) return k;
  }
  return last;
}

}  // namespace

std::vector<sensors::AttackScenario> plan_attacks(const ScenarioConfig& cfg) {
  std::vector<sensors::AttackScenario> out;
  const auto& a = cfg.attacks;
  const SimTimeMs wms = window_ms(cfg);
  const auto n_windows = static_cast<std::size_t>(horizon_ms(cfg) / wms);
  if (a.window_fraction > 0.0 && !a.mix.empty() && n_windows > 0) {
    Rng rng(derive_seed(cfg.seed, {kTagPlan}));
    const double mean_len = 0.5 * static_cast<double>(a.episode_min_windows + a.episode_max_windows);
    // Mean clean gap that yields the requested attacked share.
    const double mean_gap = mean_len * (1.0 - a.window_fraction) / a.window_fraction;
    for (std::size_t v = 0; v < cfg.n_vehicles; ++v) {
      std::size_t w = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(std::llround(2.0 * mean_gap))));
      while (w < n_windows) {
        const auto len = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(a.episode_min_windows),
                                                                  static_cast<std::int64_t>(a.episode_max_windows)));
        sensors::AttackScenario s;
        s.kind = draw_kind(a.mix, rng);
        s.intensity = rng.uniform(a.intensity_min, a.intensity_max);
        s.start_ms = static_cast<SimTimeMs>(w) * wms;
        s.end_ms = static_cast<SimTimeMs>(std::min(w + len, n_windows)) * wms;
        s.target_vehicles = {static_cast<VehicleId>(v)};
        out.push_back(std::move(s));
        w += len + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(std::llround(2.0 * mean_gap))));
      }
    }
  }
  for (const auto& s : a.scheduled) {
    sensors::AttackScenario sc;
    sc.kind = s.kind;
    sc.intensity = s.intensity;
    sc.start_ms = s.start_ms;
    sc.end_ms = s.end_ms;
    sc.target_vehicles.insert(s.targets.begin(), s.targets.end());
    out.push_back(std::move(sc));
  }
  return out;
}

edge::TrainedDetector train_bootstrap(const ScenarioConfig& cfg) {
  sensors::CorpusSpec spec;
  spec.vehicles = cfg.bootstrap.vehicles;
  spec.duration_ms = std::llround(cfg.bootstrap.duration_s * 1000.0);
  spec.window_length = cfg.window_length;
  spec.attack_fraction = cfg.bootstrap.attack_fraction;
  spec.intensity_min = cfg.attacks.intensity_min;
  spec.intensity_max = cfg.attacks.intensity_max;
  spec.glitch_rate_hz = cfg.glitch_rate_hz;
  spec.glitch_scale_max = cfg.glitch_scale_max;
  const auto seed = derive_seed(cfg.seed, {kTagBootstrap});
  return edge::train_base_scorers(sensors::generate_labeled_corpus(seed, spec), seed);
}

namespace {

struct Vehicle {
  VehicleId id = 0;
  RegionId region = 0;
  std::unique_ptr<sensors::CleanStreamGenerator> gen;
  std::vector<const sensors::AttackScenario*> sensor_attacks;
  std::vector<const sensors::AttackScenario*> poison_attacks;
  std::deque<std::vector<double>> rows;
  std::deque<int> labels;
  bool byzantine = false;
};

struct InboxEntry {
  fed::ClientUpdate update;
  bool poisoned = false;
};

struct Region {
  RegionId id = 0;
  std::vector<VehicleId> members;
  fed::GlobalModel model;
  std::shared_ptr<const edge::MarginScorer> margin;
  edge::ScorerSet scorers;
  std::unique_ptr<fed::PrivacyAccountant> accountant;
  fed::PrivacyConfig privacy;
  std::unique_ptr<Rng> rng;
  bool collecting = false;
  std::vector<InboxEntry> inbox;
  std::array<double, 8> class_counts{};
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, const edge::TrainedDetector& det)
      : cfg_(cfg), det_(det), engine_(cfg.record_trace), wms_(window_ms(cfg)), end_ms_(horizon_ms(cfg)),
        n_windows_(static_cast<std::size_t>(end_ms_ / wms_)), net_rng_(derive_seed(cfg.seed, {kTagNet})),
        pbft_rng_(derive_seed(cfg.seed, {kTagPbft})), cross_(cfg.chain.filter.frequency_window_ms) {
    weights_ = edge::compute_weights(det.accuracies, cfg.detector.temperature);
    result_.attacks = plan_attacks(cfg);
    setup_fleet();
    setup_chain();
  }

  ScenarioResult run() {
    const auto wall0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < n_windows_; ++k) {
      engine_.schedule_at(static_cast<SimTimeMs>(k + 1) * wms_, [this, k] { tick(k); }, "window");
      engine_.schedule_at(static_cast<SimTimeMs>(k + 1) * wms_ + kJamCheckDelayMs, [this, k] { jam_check(k); }, "jam-check");
    }
    const auto interval = std::llround(cfg_.federated.aggregator.round_interval_s * 1000.0);
    for (SimTimeMs t = interval; t <= end_ms_; t += interval) {
      engine_.schedule_at(t, [this] { start_round(); }, "fl-round");
    }
    engine_.run_until(end_ms_);
    engine_.run();
    finalize(std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count());
    return std::move(result_);
  }

 private:
  // ---- setup ---------------------------------------------------------

  void setup_fleet() {
    Rng profile_rng(derive_seed(cfg_.seed, {kTagProfile}));
    vehicles_.resize(cfg_.n_vehicles);
    regions_.resize(cfg_.n_regions);
    for (std::size_t r = 0; r < cfg_.n_regions; ++r) regions_[r].id = static_cast<RegionId>(r);
    for (std::size_t v = 0; v < cfg_.n_vehicles; ++v) {
      auto& veh = vehicles_[v];
      veh.id = static_cast<VehicleId>(v);
      veh.region = static_cast<RegionId>(v % cfg_.n_regions);
      auto profile = sensors::DriveProfile::sample(profile_rng);
      profile.glitch_rate_hz = cfg_.glitch_rate_hz;
      profile.glitch_scale_max = cfg_.glitch_scale_max;
      veh.gen = std::make_unique<sensors::CleanStreamGenerator>(cfg_.seed, veh.id, profile);
      regions_[veh.region].members.push_back(veh.id);
    }
    for (const auto& a : result_.attacks) {
      for (auto v : a.target_vehicles) {
        if (v >= vehicles_.size()) continue;
        if (sensors::perturbs_features(a.kind)) vehicles_[v].sensor_attacks.push_back(&a);
        if (a.kind == sensors::AttackKind::MlPoison) vehicles_[v].poison_attacks.push_back(&a);
        if (a.kind == sensors::AttackKind::CommJam) {
          // Window k's traffic leaves when the window closes, one window
          // after the samples it covers.
          auto shifted = a;
          shifted.start_ms += wms_;
          shifted.end_ms += wms_;
          net::JamSelector sel;
          sel.tier = net::Tier::RegionalV2X;
          engine_.apply_jam(shifted, sel, cfg_.network.jam_loss_boost, cfg_.network.jam_delay_ms);
        }
      }
    }
    for (auto& reg : regions_) {
      reg.model.weights = det_.margin->head();
      reg.margin = det_.margin;
      reg.scorers = {det_.forest, reg.margin, det_.recurrent};
      reg.privacy = fed::PrivacyConfig::for_region(reg.members.size(), cfg_.privacy.epsilon, cfg_.privacy.delta_fail);
      reg.privacy.zero_noise = cfg_.privacy.zero_noise;
      reg.accountant = std::make_unique<fed::PrivacyAccountant>(cfg_.privacy.epsilon, cfg_.privacy.delta_fail);
      reg.rng = std::make_unique<Rng>(derive_seed(cfg_.seed, {kTagFed, reg.id}));
      Rng pick(derive_seed(cfg_.seed, {kTagByzantine, reg.id}));
      auto order = reg.members;
      std::shuffle(order.begin(), order.end(), pick.engine());
      const auto n_byz = static_cast<std::size_t>(
          std::floor(cfg_.federated.byzantine_ratio * static_cast<double>(reg.members.size()) + 1e-9));
      for (std::size_t i = 0; i < n_byz; ++i) vehicles_[order[i]].byzantine = true;
    }
    heartbeat_.assign(cfg_.n_vehicles, std::vector<std::uint8_t>(n_windows_, 0));
    jam_flag_.assign(cfg_.n_vehicles, std::vector<std::uint8_t>(n_windows_, 0));
  }

  void setup_chain() {
    validators_ = chain::make_validators(cfg_.chain.validators, cfg_.chain.crashed_validators, cfg_.chain.byzantine_validators);
    pbft_cfg_.channel = cfg_.network.global;
    pbft_cfg_.view_timeout_ms = cfg_.chain.view_timeout_ms;
  }

  // ---- Tier 1 --------------------------------------------------------

  void tick(std::size_t k) {
    const SimTimeMs now = engine_.now();
    const SimTimeMs start = static_cast<SimTimeMs>(k) * wms_;
    for (auto& veh : vehicles_) {
      sensors::FeatureWindow fw;
      fw.vehicle_id = veh.id;
      fw.window_start_ms = start;
      fw.samples.reserve(cfg_.window_length);
      bool truth = false;
      std::optional<sensors::AttackKind> truth_kind;
      for (std::size_t i = 0; i < cfg_.window_length; ++i) {
        auto x = veh.gen->next();
        for (const auto* a : veh.sensor_attacks) {
          if (!a->active_at(x.timestamp_ms)) continue;
          x = sensors::perturb_sample(x, *a, veh.id, cfg_.seed);
          truth = true;
          if (!truth_kind) truth_kind = a->kind;
        }
        fw.samples.push_back(x);
      }
      const auto features = edge::extract_features(fw);
      auto& reg = regions_[veh.region];
      const auto verdict = edge::ensemble_predict(features, reg.scorers, weights_, cfg_.detector);
      latencies_ms_.push_back(static_cast<double>(verdict.inference_time_us) / 1000.0);

      VerdictRecord rec;
      rec.vehicle_id = veh.id;
      rec.region_id = veh.region;
      rec.window_index = static_cast<std::uint32_t>(k);
      rec.window_start_ms = start;
      rec.truth = truth;
      if (truth_kind) rec.truth_kind = std::string(sensors::to_string(*truth_kind));
      rec.predicted = verdict.is_anomaly;
      rec.anomaly_score = verdict.anomaly_score;
      rec.confidence = verdict.confidence;
      rec.threat_level = std::string(edge::to_string(verdict.threat_level));

      veh.rows.push_back(reg.margin->standardize(features.summary));
      veh.labels.push_back(truth ? 1 : 0);
      if (veh.rows.size() > cfg_.federated.local_history_windows) {
        veh.rows.pop_front();
        veh.labels.pop_front();
      }

      send_regional("heartbeat", veh, [this, v = veh.id, k] { heartbeat_[v][k] = 1; });

      if (verdict.is_anomaly) {
        const auto cls = det_.classifier.classify(features.summary, verdict.anomaly_score);
        rec.threat_class = std::string(edge::to_string(cls));
        auto sig = edge::make_signature(features.summary, verdict.threat_level, veh.id, now, cls, verdict.severity, veh.region);
        const double conf = verdict.confidence;
        send_regional("incident", veh, [this, sig, conf] { on_incident(sig, conf); });
      }
      result_.verdicts.push_back(std::move(rec));
    }
  }

  template <class F>
  void send_regional(const char* kind, const Vehicle& veh, F&& handler) {
    net::Envelope env{kind, veh.id, 1'000'000ULL + veh.region, veh.region, veh.id};
    engine_.deliver(cfg_.network.regional, env, std::forward<F>(handler), net_rng_);
  }

  // Loss of several heartbeats in a row marks the vehicle's link as jammed.
  void jam_check(std::size_t k) {
    for (std::size_t v = 0; v < vehicles_.size(); ++v) {
      const bool miss0 = !heartbeat_[v][k];
      const bool miss1 = k >= 1 && !heartbeat_[v][k - 1];
      const bool miss2 = k >= 2 && !heartbeat_[v][k - 2];
      jam_flag_[v][k] = miss0 && (miss1 || miss2);
    }
  }

  // ---- Tier 2 coordinator: incidents ---------------------------------

  void on_incident(const edge::ThreatSignature& sig, double confidence) {
    const SimTimeMs now = engine_.now();
    ++result_.report.incidents;
    auto& reg = regions_[sig.region_id];
    reg.class_counts[sig.attack_class == edge::ThreatClass::Unknown ? 7 : static_cast<std::size_t>(sig.attack_class)] += 1.0;

    const auto key = std::make_pair(sig.vehicle_id, sig.attack_class);
    auto it = last_logged_.find(key);
    if (it != last_logged_.end() && now - it->second < cfg_.chain.incident_cooldown_ms) return;

    chain::ThreatEvent ev;
    ev.signature = sig;
    ev.severity = sig.severity;
    ev.cross_regional_frequency = chain::track_cross_regional(cross_, sig, sig.region_id, now);
    ev.consensus_confidence = confidence;
    ev.observed_at_ms = now;
    const bool log = chain::should_log(ev, cfg_.chain.filter);
    result_.offered_events.push_back(ev);
    result_.log_decisions.push_back(log);
    if (!log) return;
    last_logged_[key] = now;
    net::Envelope env{"threat-event", 1'000'000ULL + sig.region_id, 2'000'000ULL, sig.region_id, std::nullopt};
    engine_.deliver(cfg_.network.global, env, [this, ev] { on_chain_event(ev); }, net_rng_);
  }

  // ---- Tier 3 --------------------------------------------------------

  void on_chain_event(const chain::ThreatEvent& ev) {
    ++logged_;
    const bool was_empty = pending_.empty();
    pending_.push_back(ev);
    if (pending_.size() >= cfg_.chain.batch_size) mine();
    else if (was_empty) schedule_flush();
  }

  void schedule_flush() {
    if (engine_.now() > end_ms_ + kDrainMs) return;
    engine_.schedule(cfg_.chain.batch_timeout_ms, [this] {
      if (!pending_.empty()) mine();
    }, "batch-flush");
  }

  void mine() {
    const auto w0 = std::chrono::steady_clock::now();
    const chain::Block* tip = result_.ledger.empty() ? nullptr : &result_.ledger.back();
    const auto proposer = validators_[validators_.front().view % validators_.size()].node_id;
    auto backup = pending_;
    auto block = chain::assemble_block(pending_, tip, proposer, engine_.now(), cfg_.chain.batch_size);
    const auto outcome = chain::pbft_round(validators_, block.block_hash, block.index, pbft_rng_, pbft_cfg_);
    mining_wall_ms_.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - w0).count());
    pbft_messages_ += outcome.messages;
    pbft_dropped_ += outcome.dropped;
    if (!outcome.committed) {
      ++result_.report.failed_consensus_rounds;
      pending_ = std::move(backup);
      schedule_flush();
      return;
    }
    block_times_s_.push_back(outcome.timing.t_consensus_ms / 1000.0);
    result_.ledger.push_back(std::move(block));
    const auto index = result_.ledger.size() - 1;
    engine_.schedule(std::llround(outcome.timing.t_consensus_ms), [this, index] {
      auto d = registry_.apply(result_.ledger[index]);
      result_.directives.insert(result_.directives.end(), d.begin(), d.end());
    }, "block-confirm");
    if (!pending_.empty()) schedule_flush();
  }

  // ---- Tier 2 coordinator: federated rounds --------------------------

  fed::LogisticObjective local_objective(const Vehicle& v) const {
    return fed::LogisticObjective({v.rows.begin(), v.rows.end()}, {v.labels.begin(), v.labels.end()});
  }

  double regional_loss(const Region& reg) const {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (auto id : reg.members) {
      const auto& v = vehicles_[id];
      if (v.byzantine) continue;
      rows.insert(rows.end(), v.rows.begin(), v.rows.end());
      labels.insert(labels.end(), v.labels.begin(), v.labels.end());
    }
    if (rows.empty()) return 0.0;
    return fed::LogisticObjective(std::move(rows), std::move(labels)).loss(reg.model.weights);
  }

  void start_round() {
    const SimTimeMs now = engine_.now();
    if (loss_series_.empty()) {
      double sum = 0.0;
      for (const auto& reg : regions_) sum += regional_loss(reg);
      loss_series_.emplace_back(0, sum / static_cast<double>(regions_.size()));
    }
    const double lr = cfg_.federated.aggregator.learning_rate;
    for (auto& reg : regions_) {
      reg.collecting = true;
      reg.inbox.clear();
      for (auto id : reg.members) {
        auto& v = vehicles_[id];
        if (v.rows.empty()) continue;
        const auto obj = local_objective(v);
        auto update = fed::local_train(reg.model, obj, lr, v.id);
        bool poisoned = false;
        if (v.byzantine) {
          update = fed::byzantine_update({fed::ByzantineKind::SignFlip, cfg_.federated.byzantine_magnitude}, update, *reg.rng);
        } else if (std::any_of(v.poison_attacks.begin(), v.poison_attacks.end(),
                               [now](const auto* a) { return a->active_at(now); })) {
          fed::LabelFlipContext ctx{&reg.model, &obj, lr};
          update = fed::byzantine_update({fed::ByzantineKind::LabelFlip, 1.0}, update, *reg.rng, &ctx);
          poisoned = true;
        }
        send_regional("fl-update", v, [this, r = v.region, u = std::move(update), poisoned]() mutable {
          auto& rg = regions_[r];
          if (rg.collecting) rg.inbox.push_back({std::move(u), poisoned});
        });
      }
    }
    engine_.schedule(cfg_.federated.collect_deadline_ms, [this] { close_round(); }, "fl-deadline");
  }

  void close_round() {
    const auto round_index = loss_series_.size();
    double loss_sum = 0.0;
    for (auto& reg : regions_) {
      reg.collecting = false;
      RoundRecord rr;
      rr.region_id = reg.id;
      rr.round = round_index;
      rr.time_ms = engine_.now();
      rr.expected = reg.members.size();
      rr.received = reg.inbox.size();
      const auto quorum = static_cast<std::size_t>(std::ceil(cfg_.federated.quorum_fraction * static_cast<double>(reg.members.size())));
      rr.quorum_met = !reg.inbox.empty() && reg.inbox.size() >= quorum;
      if (rr.quorum_met) {
        std::vector<fed::ClientUpdate> updates;
        updates.reserve(reg.inbox.size());
        for (const auto& e : reg.inbox) updates.push_back(e.update);
        const auto res = fed::aggregate_round(reg.model, updates, cfg_.federated.aggregator, reg.privacy, *reg.accountant, *reg.rng);
        reg.model = res.model;
        reg.margin = std::make_shared<const edge::MarginScorer>(reg.margin->with_head(reg.model.weights));
        reg.scorers[1] = reg.margin;
        rr.rejected = res.summary.rejected;
        rr.aggregated = res.summary.aggregated;
        rr.mean_survivors = res.summary.mean_survivors;
        rr.aggregate_norm = res.summary.aggregate_norm;
        // Accepted updates keep inbox order, so trimmed shares line up with
        // the inbox entries that passed ingestion.
        std::size_t j = 0;
        for (const auto& e : reg.inbox) {
          if (j >= res.accepted.size() || res.accepted[j] != e.update.vehicle_id) continue;
          if (e.poisoned) {
            ++poison_total_;
            if (res.trimmed_fraction[j] > 0.5) ++poison_caught_;
          }
          ++j;
        }
        // Regional threat-pattern histogram released under the same budget.
        std::vector<double> stats(reg.class_counts.begin(), reg.class_counts.end());
        for (auto& s : stats) s /= static_cast<double>(reg.members.size());
        (void)fed::privatize_signature(stats, reg.members.size(), reg.privacy, *reg.rng);
        reg.accountant->charge(1);
        reg.class_counts.fill(0.0);
      }
      rr.loss = regional_loss(reg);
      const auto spent = reg.accountant->spent();
      rr.budget_basic = spent.basic;
      rr.budget_advanced = spent.advanced;
      loss_sum += rr.loss;
      result_.rounds.push_back(rr);
    }
    loss_series_.emplace_back(round_index, loss_sum / static_cast<double>(regions_.size()));
  }

  // ---- metrics -------------------------------------------------------

  void finalize(double wall_s) {
    auto& r = result_.report;
    r.seed = cfg_.seed;
    r.n_vehicles = cfg_.n_vehicles;
    r.n_regions = cfg_.n_regions;
    r.duration_s = cfg_.duration_s;
    apply_confusion(r, confusion_from(result_.verdicts), cfg_.alpha_min);

    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_kind;  // detected, total
    std::uint64_t class_ok = 0, class_n = 0;
    std::uint64_t detected = 0;
    for (const auto& v : result_.verdicts) {
      if (v.predicted) ++detected;
      if (!v.truth) continue;
      auto& pk = per_kind[v.truth_kind];
      ++pk.second;
      if (v.predicted) {
        ++pk.first;
        ++class_n;
        if (v.threat_class == v.truth_kind) ++class_ok;
      }
    }
    for (const auto& [k, c] : per_kind) r.per_attack_detection_rate[k] = static_cast<double>(c.first) / static_cast<double>(c.second);
    r.class_accuracy = class_n ? static_cast<double>(class_ok) / static_cast<double>(class_n) : 0.0;

    std::uint64_t jam_total = 0, jam_flagged = 0;
    for (const auto& a : result_.attacks) {
      if (a.kind != sensors::AttackKind::CommJam) continue;
      for (auto v : a.target_vehicles) {
        if (v >= vehicles_.size()) continue;
        for (std::size_t k = 0; k < n_windows_; ++k) {
          const SimTimeMs ws = static_cast<SimTimeMs>(k) * wms_;
          if (ws < a.start_ms || ws >= a.end_ms) continue;
          ++jam_total;
          jam_flagged += jam_flag_[v][k];
        }
      }
    }
    if (jam_total) r.per_attack_detection_rate["CommJam"] = static_cast<double>(jam_flagged) / static_cast<double>(jam_total);
    if (poison_total_) r.per_attack_detection_rate["MlPoison"] = static_cast<double>(poison_caught_) / static_cast<double>(poison_total_);

    r.fl_convergence = loss_series_;
    r.fl_rounds = loss_series_.empty() ? 0 : loss_series_.size() - 1;
    r.rounds_to_converge = rounds_to_converge(loss_series_);
    for (const auto& reg : regions_) {
      const auto s = reg.accountant->spent();
      r.privacy_basic = std::max(r.privacy_basic, s.basic);
      r.privacy_advanced = std::max(r.privacy_advanced, s.advanced);
    }

    r.total_events = result_.verdicts.size();
    r.logged_events = logged_;
    r.logged_fraction = r.total_events ? chain::storage_stats(r.total_events, logged_) : 0.0;
    r.blocks_mined = result_.ledger.size();
    if (!block_times_s_.empty()) {
      double s = 0.0;
      for (double t : block_times_s_) s += t;
      r.mean_block_time_s = s / static_cast<double>(block_times_s_.size());
    }
    r.directives = result_.directives.size();
    r.throughput_threats_per_s_per_region =
        static_cast<double>(detected) / cfg_.duration_s / static_cast<double>(cfg_.n_regions);
    r.messages_sent = engine_.counters().sent + pbft_messages_;
    r.drop_count = engine_.counters().dropped + pbft_dropped_;

    auto& t = result_.timing;
    if (!latencies_ms_.empty()) {
      double s = 0.0;
      for (double x : latencies_ms_) s += x;
      t.latency_mean_ms = s / static_cast<double>(latencies_ms_.size());
      t.latency_median_ms = percentile(latencies_ms_, 50.0);
      t.latency_p95_ms = percentile(latencies_ms_, 95.0);
      t.latency_max_ms = *std::max_element(latencies_ms_.begin(), latencies_ms_.end());
      t.tau_max_violations = static_cast<std::uint64_t>(
          std::count_if(latencies_ms_.begin(), latencies_ms_.end(), [this](double x) { return x > cfg_.tau_max_ms; }));
    }
    if (!mining_wall_ms_.empty()) {
      double s = 0.0;
      for (double x : mining_wall_ms_) s += x;
      t.mining_wall_ms_mean = s / static_cast<double>(mining_wall_ms_.size());
    }
    t.run_wall_s = wall_s;
    if (cfg_.record_trace) result_.trace = engine_.trace();
  }

  const ScenarioConfig& cfg_;
  const edge::TrainedDetector& det_;
  net::Engine engine_;
  SimTimeMs wms_, end_ms_;
  std::size_t n_windows_;
  Rng net_rng_, pbft_rng_;
  edge::EnsembleWeights weights_;
  std::vector<Vehicle> vehicles_;
  std::vector<Region> regions_;
  std::vector<std::vector<std::uint8_t>> heartbeat_, jam_flag_;

  chain::CrossRegionRegistry cross_;
  std::map<std::pair<VehicleId, edge::ThreatClass>, SimTimeMs> last_logged_;
  std::vector<chain::ThreatEvent> pending_;
  std::vector<chain::ValidatorState> validators_;
  chain::PbftConfig pbft_cfg_;
  chain::ThreatRegistry registry_;
  std::uint64_t logged_ = 0, pbft_messages_ = 0, pbft_dropped_ = 0;
  std::uint64_t poison_total_ = 0, poison_caught_ = 0;

  std::vector<std::pair<std::uint64_t, double>> loss_series_;
  std::vector<double> latencies_ms_, mining_wall_ms_, block_times_s_;
  ScenarioResult result_;
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const edge::TrainedDetector& detector) {
  cfg.validate();
  Simulation sim(cfg, detector);
  return sim.run();
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  return run_scenario(cfg, train_bootstrap(cfg));
}

}  // namespace haven::harness
