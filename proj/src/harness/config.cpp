#include "haven/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace haven::harness {

using nlohmann::json;
using nlohmann::ordered_json;

std::map<sensors::AttackKind, double> uniform_attack_mix() {
  std::map<sensors::AttackKind, double> mix;
  for (auto k : sensors::kAllAttackKinds) mix[k] = 1.0 / static_cast<double>(sensors::kAllAttackKinds.size());
  return mix;
}

ScenarioConfig reference_config() {
  ScenarioConfig c;
  c.attacks.mix = uniform_attack_mix();
  c.federated.aggregator.round_interval_s = 5.0;
  return c;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void check_channel(const net::ChannelModel& c, const std::string& field) {
  require(c.base_latency_ms >= 0.0 && std::isfinite(c.base_latency_ms), field + ".base_latency_ms", "must be >= 0");
  require(c.jitter_fraction >= 0.0 && c.jitter_fraction <= 1.0, field + ".jitter_fraction", "must lie in [0, 1]");
  require(c.loss_probability >= 0.0 && c.loss_probability < 1.0, field + ".loss_probability", "must lie in [0, 1)");
}

}  // namespace

void ScenarioConfig::validate() const {
  require(n_vehicles >= 1, "n_vehicles", "must be >= 1");
  require(n_regions >= 1 && n_regions <= n_vehicles, "n_regions", "must lie in [1, n_vehicles]");
  require(duration_s > 0.0 && std::isfinite(duration_s), "duration_s", "must be > 0");
  require(window_length >= 2, "window_length", "must be >= 2");
  {
    const double ms = duration_s * 1000.0;
    require(std::abs(ms - std::round(ms)) < 1e-9, "duration_s", "must be a whole number of milliseconds");
  }
  require(glitch_rate_hz >= 0.0, "glitch_rate_hz", "must be >= 0");
  require(glitch_scale_max >= 0.03 && glitch_scale_max <= 1.0, "glitch_scale_max", "must lie in [0.03, 1]");

  require(attacks.window_fraction >= 0.0 && attacks.window_fraction < 1.0, "attacks.window_fraction", "must lie in [0, 1)");
  if (attacks.window_fraction > 0.0) {
    double sum = 0.0;
    for (const auto& [k, f] : attacks.mix) {
      require(f >= 0.0, "attacks.mix", "fractions must be >= 0");
      sum += f;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "attacks.mix", "fractions must sum to 1");
  }
  require(attacks.intensity_min >= 0.0 && attacks.intensity_min <= attacks.intensity_max && attacks.intensity_max <= 1.0,
          "attacks.intensity_min", "need 0 <= intensity_min <= intensity_max <= 1");
  require(attacks.episode_min_windows >= 1 && attacks.episode_min_windows <= attacks.episode_max_windows,
          "attacks.episode_min_windows", "need 1 <= min <= max");
  for (const auto& s : attacks.scheduled) {
    require(s.start_ms < s.end_ms, "attacks.scheduled", "start_ms must precede end_ms");
    require(s.intensity >= 0.0 && s.intensity <= 1.0, "attacks.scheduled", "intensity must lie in [0, 1]");
    for (auto v : s.targets) require(v < n_vehicles, "attacks.scheduled", "target vehicle out of range");
  }

  try {
    edge::validate(detector, /*allow_degenerate=*/true);
  } catch (const ConfigError& e) {
    throw ConfigError("detector." + e.field(), e.what());
  }

  const auto& fl = federated;
  require(fl.aggregator.trim_ratio >= 0.0 && fl.aggregator.trim_ratio < 0.5, "federated.trim_ratio", "must lie in [0, 0.5)");
  require(fl.byzantine_ratio >= 0.0 && fl.byzantine_ratio <= 0.3, "federated.byzantine_ratio", "must lie in [0, 0.3]");
  require(fl.byzantine_ratio <= fl.aggregator.trim_ratio, "federated.byzantine_ratio", "exceeds trim capacity (trim_ratio)");
  require(fl.byzantine_magnitude > 0.0 && std::isfinite(fl.byzantine_magnitude), "federated.byzantine_magnitude", "must be > 0");
  require(fl.aggregator.learning_rate > 0.0, "federated.learning_rate", "must be > 0");
  require(fl.aggregator.round_interval_s > 0.0, "federated.round_interval_s", "must be > 0");
  require(fl.collect_deadline_ms > 0, "federated.collect_deadline_ms", "must be > 0");
  require(fl.quorum_fraction >= 0.0 && fl.quorum_fraction <= 1.0, "federated.quorum_fraction", "must lie in [0, 1]");
  require(fl.local_history_windows >= 1, "federated.local_history_windows", "must be >= 1");

  require(privacy.epsilon > 0.0, "privacy.epsilon", "must be > 0");
  require(privacy.delta_fail > 0.0 && privacy.delta_fail < 1.0, "privacy.delta", "must lie in (0, 1)");

  try {
    chain.filter.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("chain.filter", e.what());
  }
  require(chain.validators >= 1, "chain.validators", "must be >= 1");
  require(chain.crashed_validators + chain.byzantine_validators <= chain.validators, "chain.crashed_validators",
          "faulty validators exceed the validator count");
  require(chain.batch_size >= 1, "chain.batch_size", "must be >= 1");
  require(chain.batch_timeout_ms > 0, "chain.batch_timeout_ms", "must be > 0");
  require(chain.view_timeout_ms > 0, "chain.view_timeout_ms", "must be > 0");
  require(chain.incident_cooldown_ms >= 0, "chain.incident_cooldown_ms", "must be >= 0");

  check_channel(network.edge, "network.edge");
  check_channel(network.regional, "network.regional");
  check_channel(network.global, "network.global");
  require(network.jam_loss_boost >= 0.0 && network.jam_loss_boost <= 1.0, "network.jam_loss_boost", "must lie in [0, 1]");
  require(network.jam_delay_ms >= 0.0, "network.jam_delay_ms", "must be >= 0");

  require(bootstrap.vehicles >= 2, "bootstrap.vehicles", "must be >= 2");
  require(bootstrap.duration_s > 0.0, "bootstrap.duration_s", "must be > 0");
  require(bootstrap.attack_fraction > 0.0 && bootstrap.attack_fraction < 1.0, "bootstrap.attack_fraction", "must lie in (0, 1)");

  require(tau_max_ms > 0.0, "tau_max_ms", "must be > 0");
  require(alpha_min >= 0.0 && alpha_min <= 1.0, "alpha_min", "must lie in [0, 1]");
}

namespace {

/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void number(const std::string& key, double& out) {
    if (auto* v = find(key)) {
      require(v->is_number(), field(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <class U>
  void unsigned_int(const std::string& key, U& out) {
    if (auto* v = find(key)) {
      require(v->is_number_unsigned(), field(key), "expected a non-negative integer");
      out = static_cast<U>(v->get<std::uint64_t>());
    }
  }

  void integer(const std::string& key, std::int64_t& out) {
    if (auto* v = find(key)) {
      require(v->is_number_integer(), field(key), "expected an integer");
      out = v->get<std::int64_t>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto* v = find(key)) {
      require(v->is_boolean(), field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (auto* v = find(key)) {
      require(v->is_string(), field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <class F>
  void object(const std::string& key, F&& fn) {
    if (auto* v = find(key)) {
      Reader sub(*v, field(key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }
  }

  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_channel(Reader& r, net::ChannelModel& c) {
  r.number("base_latency_ms", c.base_latency_ms);
  r.number("jitter_fraction", c.jitter_fraction);
  r.number("loss_probability", c.loss_probability);
}

sensors::AttackKind parse_kind(const std::string& s, const std::string& field) {
  try {
    return sensors::attack_kind_from_string(s);
  } catch (const std::invalid_argument&) {
    throw ConfigError(field, "unknown attack kind '" + s + "'");
  }
}

ordered_json channel_json(const net::ChannelModel& c) {
  return {{"base_latency_ms", c.base_latency_ms}, {"jitter_fraction", c.jitter_fraction}, {"loss_probability", c.loss_probability}};
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  ScenarioConfig c = reference_config();
  Reader r(root, "");
  r.unsigned_int("seed", c.seed);
  r.unsigned_int("n_vehicles", c.n_vehicles);
  r.unsigned_int("n_regions", c.n_regions);
  r.number("duration_s", c.duration_s);
  r.unsigned_int("window_length", c.window_length);
  r.number("glitch_rate_hz", c.glitch_rate_hz);
  r.number("glitch_scale_max", c.glitch_scale_max);
  r.number("tau_max_ms", c.tau_max_ms);
  r.number("alpha_min", c.alpha_min);
  r.boolean("record_trace", c.record_trace);

  r.object("attacks", [&](Reader& a) {
    a.number("window_fraction", c.attacks.window_fraction);
    a.number("intensity_min", c.attacks.intensity_min);
    a.number("intensity_max", c.attacks.intensity_max);
    a.unsigned_int("episode_min_windows", c.attacks.episode_min_windows);
    a.unsigned_int("episode_max_windows", c.attacks.episode_max_windows);
    if (const auto* mix = a.find("mix")) {
      require(mix->is_object(), a.field("mix"), "expected an object of kind -> fraction");
      c.attacks.mix.clear();
      for (auto it = mix->begin(); it != mix->end(); ++it) {
        const auto f = a.field("mix." + it.key());
        require(it->is_number(), f, "expected a number");
        c.attacks.mix[parse_kind(it.key(), f)] = it->get<double>();
      }
    }
    if (const auto* sched = a.find("scheduled")) {
      require(sched->is_array(), a.field("scheduled"), "expected an array");
      c.attacks.scheduled.clear();
      for (std::size_t i = 0; i < sched->size(); ++i) {
        Reader e((*sched)[i], a.field("scheduled[" + std::to_string(i) + "]"));
        ScheduledAttack s;
        std::string kind;
        e.string("kind", kind);
        require(!kind.empty(), e.field("kind"), "required");
        s.kind = parse_kind(kind, e.field("kind"));
        e.number("intensity", s.intensity);
        e.integer("start_ms", s.start_ms);
        e.integer("end_ms", s.end_ms);
        if (const auto* t = e.find("targets")) {
          require(t->is_array(), e.field("targets"), "expected an array of vehicle ids");
          for (const auto& v : *t) {
            require(v.is_number_unsigned(), e.field("targets"), "expected vehicle ids");
            s.targets.push_back(v.get<VehicleId>());
          }
        }
        e.finish();
        c.attacks.scheduled.push_back(std::move(s));
      }
    }
  });
  r.object("detector", [&](Reader& d) {
    d.number("theta1", c.detector.theta1);
    d.number("theta2", c.detector.theta2);
    d.number("temperature", c.detector.temperature);
  });
  r.object("federated", [&](Reader& f) {
    auto& fl = c.federated;
    f.number("byzantine_ratio", fl.byzantine_ratio);
    f.number("byzantine_magnitude", fl.byzantine_magnitude);
    f.number("trim_ratio", fl.aggregator.trim_ratio);
    f.number("learning_rate", fl.aggregator.learning_rate);
    f.number("round_interval_s", fl.aggregator.round_interval_s);
    f.boolean("weighted", fl.aggregator.weighted);
    std::string rule;
    f.string("aggregation", rule);
    if (!rule.empty()) {
      if (rule == "trimmed_mean") fl.aggregator.rule = fed::AggregationRule::TrimmedMean;
      else if (rule == "plain_mean") fl.aggregator.rule = fed::AggregationRule::PlainMean;
      else throw ConfigError(f.field("aggregation"), "expected trimmed_mean or plain_mean");
    }
    f.integer("collect_deadline_ms", fl.collect_deadline_ms);
    f.number("quorum_fraction", fl.quorum_fraction);
    f.unsigned_int("local_history_windows", fl.local_history_windows);
  });
  r.object("privacy", [&](Reader& p) {
    p.number("epsilon", c.privacy.epsilon);
    p.number("delta", c.privacy.delta_fail);
    p.boolean("zero_noise", c.privacy.zero_noise);
  });
  r.object("chain", [&](Reader& ch) {
    ch.object("filter", [&](Reader& f) {
      f.number("severity_threshold", c.chain.filter.severity_threshold);
      f.unsigned_int("frequency_threshold", c.chain.filter.frequency_threshold);
      f.number("confidence_threshold", c.chain.filter.confidence_threshold);
      f.integer("frequency_window_ms", c.chain.filter.frequency_window_ms);
    });
    ch.unsigned_int("validators", c.chain.validators);
    ch.unsigned_int("crashed_validators", c.chain.crashed_validators);
    ch.unsigned_int("byzantine_validators", c.chain.byzantine_validators);
    ch.unsigned_int("batch_size", c.chain.batch_size);
    ch.integer("batch_timeout_ms", c.chain.batch_timeout_ms);
    ch.integer("view_timeout_ms", c.chain.view_timeout_ms);
    ch.integer("incident_cooldown_ms", c.chain.incident_cooldown_ms);
  });
  r.object("network", [&](Reader& n) {
    n.object("edge", [&](Reader& x) { read_channel(x, c.network.edge); });
    n.object("regional", [&](Reader& x) { read_channel(x, c.network.regional); });
    n.object("global", [&](Reader& x) { read_channel(x, c.network.global); });
    n.number("jam_loss_boost", c.network.jam_loss_boost);
    n.number("jam_delay_ms", c.network.jam_delay_ms);
  });
  r.object("bootstrap", [&](Reader& b) {
    b.unsigned_int("vehicles", c.bootstrap.vehicles);
    b.number("duration_s", c.bootstrap.duration_s);
    b.number("attack_fraction", c.bootstrap.attack_fraction);
  });
  r.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  ordered_json mix = ordered_json::object();
  for (const auto& [k, f] : c.attacks.mix) mix[std::string(sensors::to_string(k))] = f;
  ordered_json sched = ordered_json::array();
  for (const auto& s : c.attacks.scheduled) {
    sched.push_back({{"kind", std::string(sensors::to_string(s.kind))},
                     {"intensity", s.intensity},
                     {"start_ms", s.start_ms},
                     {"end_ms", s.end_ms},
                     {"targets", s.targets}});
  }
  const auto& fl = c.federated;
  ordered_json j{
      {"seed", c.seed},
      {"n_vehicles", c.n_vehicles},
      {"n_regions", c.n_regions},
      {"duration_s", c.duration_s},
      {"window_length", c.window_length},
      {"glitch_rate_hz", c.glitch_rate_hz},
      {"glitch_scale_max", c.glitch_scale_max},
      {"attacks",
       {{"window_fraction", c.attacks.window_fraction},
        {"mix", mix},
        {"intensity_min", c.attacks.intensity_min},
        {"intensity_max", c.attacks.intensity_max},
        {"episode_min_windows", c.attacks.episode_min_windows},
        {"episode_max_windows", c.attacks.episode_max_windows},
        {"scheduled", sched}}},
      {"detector", {{"theta1", c.detector.theta1}, {"theta2", c.detector.theta2}, {"temperature", c.detector.temperature}}},
      {"federated",
       {{"byzantine_ratio", fl.byzantine_ratio},
        {"byzantine_magnitude", fl.byzantine_magnitude},
        {"trim_ratio", fl.aggregator.trim_ratio},
        {"learning_rate", fl.aggregator.learning_rate},
        {"round_interval_s", fl.aggregator.round_interval_s},
        {"weighted", fl.aggregator.weighted},
        {"aggregation", fl.aggregator.rule == fed::AggregationRule::TrimmedMean ? "trimmed_mean" : "plain_mean"},
        {"collect_deadline_ms", fl.collect_deadline_ms},
        {"quorum_fraction", fl.quorum_fraction},
        {"local_history_windows", fl.local_history_windows}}},
      {"privacy", {{"epsilon", c.privacy.epsilon}, {"delta", c.privacy.delta_fail}, {"zero_noise", c.privacy.zero_noise}}},
      {"chain",
       {{"filter",
         {{"severity_threshold", c.chain.filter.severity_threshold},
          {"frequency_threshold", c.chain.filter.frequency_threshold},
          {"confidence_threshold", c.chain.filter.confidence_threshold},
          {"frequency_window_ms", c.chain.filter.frequency_window_ms}}},
        {"validators", c.chain.validators},
        {"crashed_validators", c.chain.crashed_validators},
        {"byzantine_validators", c.chain.byzantine_validators},
        {"batch_size", c.chain.batch_size},
        {"batch_timeout_ms", c.chain.batch_timeout_ms},
        {"view_timeout_ms", c.chain.view_timeout_ms},
        {"incident_cooldown_ms", c.chain.incident_cooldown_ms}}},
      {"network",
       {{"edge", channel_json(c.network.edge)},
        {"regional", channel_json(c.network.regional)},
        {"global", channel_json(c.network.global)},
        {"jam_loss_boost", c.network.jam_loss_boost},
        {"jam_delay_ms", c.network.jam_delay_ms}}},
      {"bootstrap",
       {{"vehicles", c.bootstrap.vehicles},
        {"duration_s", c.bootstrap.duration_s},
        {"attack_fraction", c.bootstrap.attack_fraction}}},
      {"tau_max_ms", c.tau_max_ms},
      {"alpha_min", c.alpha_min},
      {"record_trace", c.record_trace},
  };
  return j.dump(2) + "\n";
}

}  // namespace haven::harness
