#include "haven/harness/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "haven/chain/block.hpp"

namespace haven::harness {

using nlohmann::ordered_json;

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format: " + std::string(s));
}

namespace {

template <class R, class V>
void visit_fields(R& r, V&& v) {
  v("seed", r.seed);
  v("n_vehicles", r.n_vehicles);
  v("n_regions", r.n_regions);
  v("duration_s", r.duration_s);
  v("windows", r.windows);
  v("tp", r.tp);
  v("fp", r.fp);
  v("tn", r.tn);
  v("fn", r.fn);
  v("accuracy", r.accuracy);
  v("precision", r.precision);
  v("recall", r.recall);
  v("f1", r.f1);
  v("precision_defined", r.precision_defined);
  v("recall_defined", r.recall_defined);
  v("alpha_min_violated", r.alpha_min_violated);
  v("class_accuracy", r.class_accuracy);
  v("per_attack_detection_rate", r.per_attack_detection_rate);
  v("fl_convergence", r.fl_convergence);
  v("rounds_to_converge", r.rounds_to_converge);
  v("fl_rounds", r.fl_rounds);
  v("privacy_budget_basic", r.privacy_basic);
  v("privacy_budget_advanced", r.privacy_advanced);
  v("incidents", r.incidents);
  v("total_events", r.total_events);
  v("logged_events", r.logged_events);
  v("logged_fraction", r.logged_fraction);
  v("blocks_mined", r.blocks_mined);
  v("failed_consensus_rounds", r.failed_consensus_rounds);
  v("mean_block_time_s", r.mean_block_time_s);
  v("directives", r.directives);
  v("throughput_threats_per_s_per_region", r.throughput_threats_per_s_per_region);
  v("messages_sent", r.messages_sent);
  v("drop_count", r.drop_count);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view s, const std::string& field) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error("report: bad number in " + field);
  return x;
}

std::uint64_t parse_u64(std::string_view s, const std::string& field) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error("report: bad integer in " + field);
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct CsvWriter {
  std::vector<std::string> names, values;
  void operator()(const char* n, const std::uint64_t& x) { add(n, std::to_string(x)); }
  void operator()(const char* n, const double& x) { add(n, fmt_double(x)); }
  void operator()(const char* n, const bool& x) { add(n, x ? "1" : "0"); }
  void operator()(const char* n, const std::map<std::string, double>& m) {
    std::string s;
    for (const auto& [k, v] : m) s += (s.empty() ? "" : ";") + k + ":" + fmt_double(v);
    add(n, s);
  }
  void operator()(const char* n, const std::vector<std::pair<std::uint64_t, double>>& series) {
    std::string s;
    for (const auto& [r, v] : series) s += (s.empty() ? "" : ";") + std::to_string(r) + ":" + fmt_double(v);
    add(n, s);
  }
  void add(const char* n, std::string v) {
    names.emplace_back(n);
    values.push_back(std::move(v));
  }
};

struct CsvReader {
  std::map<std::string, std::string> cells;
  const std::string& get(const char* n) {
    auto it = cells.find(n);
    if (it == cells.end()) throw std::runtime_error(std::string("report: missing column ") + n);
    return it->second;
  }
  void operator()(const char* n, std::uint64_t& x) { x = parse_u64(get(n), n); }
  void operator()(const char* n, double& x) { x = parse_double(get(n), n); }
  void operator()(const char* n, bool& x) {
    const auto& s = get(n);
    if (s != "0" && s != "1") throw std::runtime_error(std::string("report: bad flag in ") + n);
    x = s == "1";
  }
  void operator()(const char* n, std::map<std::string, double>& m) {
    m.clear();
    const auto& s = get(n);
    if (s.empty()) return;
    for (const auto& item : split(s, ';')) {
      const auto c = item.rfind(':');
      if (c == std::string::npos) throw std::runtime_error(std::string("report: bad entry in ") + n);
      m[item.substr(0, c)] = parse_double(std::string_view(item).substr(c + 1), n);
    }
  }
  void operator()(const char* n, std::vector<std::pair<std::uint64_t, double>>& series) {
    series.clear();
    const auto& s = get(n);
    if (s.empty()) return;
    for (const auto& item : split(s, ';')) {
      const auto c = item.find(':');
      if (c == std::string::npos) throw std::runtime_error(std::string("report: bad entry in ") + n);
      series.emplace_back(parse_u64(std::string_view(item).substr(0, c), n), parse_double(std::string_view(item).substr(c + 1), n));
    }
  }
};

struct JsonWriter {
  ordered_json j = ordered_json::object();
  template <class T>
  void operator()(const char* n, const T& x) { j[n] = x; }
  void operator()(const char* n, const std::vector<std::pair<std::uint64_t, double>>& series) {
    auto a = ordered_json::array();
    for (const auto& [r, v] : series) a.push_back({{"round", r}, {"loss", v}});
    j[n] = std::move(a);
  }
};

struct JsonReader {
  const nlohmann::json& j;
  const nlohmann::json& get(const char* n) {
    if (!j.contains(n)) throw std::runtime_error(std::string("report: missing key ") + n);
    return j.at(n);
  }
  template <class T>
  void operator()(const char* n, T& x) { x = get(n).template get<T>(); }
  void operator()(const char* n, std::vector<std::pair<std::uint64_t, double>>& series) {
    series.clear();
    for (const auto& e : get(n)) series.emplace_back(e.at("round").get<std::uint64_t>(), e.at("loss").get<double>());
  }
};

}  // namespace

std::vector<std::string> report_columns() {
  CsvWriter w;
  MetricsReport r;
  visit_fields(std::as_const(r), w);
  return w.names;
}

void write_report(const MetricsReport& r, std::ostream& os, ReportFormat fmt) {
  if (fmt == ReportFormat::Json) {
    JsonWriter w;
    visit_fields(r, w);
    os << w.j.dump(2) << '\n';
    return;
  }
  CsvWriter w;
  visit_fields(r, w);
  for (std::size_t i = 0; i < w.names.size(); ++i) os << (i ? "," : "") << w.names[i];
  os << '\n';
  for (std::size_t i = 0; i < w.values.size(); ++i) os << (i ? "," : "") << w.values[i];
  os << '\n';
}

MetricsReport read_report(std::istream& is, ReportFormat fmt) {
  MetricsReport r;
  if (fmt == ReportFormat::Json) {
    nlohmann::json j;
    try {
      is >> j;
      JsonReader rd{j};
      visit_fields(r, rd);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("report: ") + e.what());
    }
    return r;
  }
  std::string header, values;
  if (!std::getline(is, header) || !std::getline(is, values)) throw std::runtime_error("report: expected header and value rows");
  const auto names = split(header, ',');
  const auto cells = split(values, ',');
  if (names.size() != cells.size()) throw std::runtime_error("report: header and value rows differ in length");
  CsvReader rd;
  for (std::size_t i = 0; i < names.size(); ++i) rd.cells[names[i]] = cells[i];
  visit_fields(r, rd);
  return r;
}

void export_report(const MetricsReport& r, const std::string& path, ReportFormat fmt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_report(r, os, fmt);
  if (!os) throw std::runtime_error("write failed: " + path);
}

MetricsReport import_report(const std::string& path, ReportFormat fmt) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_report(is, fmt);
}

static constexpr const char* kVerdictHeader =
    "vehicle_id,region_id,window_index,window_start_ms,truth,truth_kind,predicted,anomaly_score,confidence,"
    "threat_level,threat_class";

void write_verdicts_csv(const std::vector<VerdictRecord>& v, std::ostream& os) {
  os << kVerdictHeader << '\n';
  for (const auto& r : v) {
    os << r.vehicle_id << ',' << r.region_id << ',' << r.window_index << ',' << r.window_start_ms << ','
       << (r.truth ? 1 : 0) << ',' << r.truth_kind << ',' << (r.predicted ? 1 : 0) << ',' << fmt_double(r.anomaly_score)
       << ',' << fmt_double(r.confidence) << ',' << r.threat_level << ',' << r.threat_class << '\n';
  }
}

std::vector<VerdictRecord> read_verdicts_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kVerdictHeader) throw std::runtime_error("verdicts: unexpected header");
  std::vector<VerdictRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 11) throw std::runtime_error("verdicts: expected 11 columns");
    VerdictRecord r;
    r.vehicle_id = static_cast<VehicleId>(parse_u64(c[0], "vehicle_id"));
    r.region_id = static_cast<RegionId>(parse_u64(c[1], "region_id"));
    r.window_index = static_cast<std::uint32_t>(parse_u64(c[2], "window_index"));
    r.window_start_ms = static_cast<SimTimeMs>(parse_u64(c[3], "window_start_ms"));
    r.truth = c[4] == "1";
    r.truth_kind = c[5];
    r.predicted = c[6] == "1";
    r.anomaly_score = parse_double(c[7], "anomaly_score");
    r.confidence = parse_double(c[8], "confidence");
    r.threat_level = c[9];
    r.threat_class = c[10];
    out.push_back(std::move(r));
  }
  return out;
}

void write_rounds_csv(const std::vector<RoundRecord>& rounds, std::ostream& os) {
  os << "region_id,round,time_ms,expected,received,rejected,aggregated,quorum_met,mean_survivors,aggregate_norm,loss,"
        "budget_basic,budget_advanced\n";
  for (const auto& r : rounds) {
    os << r.region_id << ',' << r.round << ',' << r.time_ms << ',' << r.expected << ',' << r.received << ',' << r.rejected
       << ',' << r.aggregated << ',' << (r.quorum_met ? 1 : 0) << ',' << fmt_double(r.mean_survivors) << ','
       << fmt_double(r.aggregate_norm) << ',' << fmt_double(r.loss) << ',' << fmt_double(r.budget_basic) << ','
       << fmt_double(r.budget_advanced) << '\n';
  }
}

void write_timing_json(const WallClockStats& t, double tau_max_ms, std::ostream& os) {
  ordered_json j{{"kind", "wall-clock"},
                 {"tier1_latency_mean_ms", t.latency_mean_ms},
                 {"tier1_latency_median_ms", t.latency_median_ms},
                 {"tier1_latency_p95_ms", t.latency_p95_ms},
                 {"tier1_latency_max_ms", t.latency_max_ms},
                 {"tau_max_ms", tau_max_ms},
                 {"tau_max_violations", t.tau_max_violations},
                 {"tau_max_violated", t.tau_max_violations > 0},
                 {"mining_wall_ms_mean", t.mining_wall_ms_mean},
                 {"run_wall_s", t.run_wall_s}};
  os << j.dump(2) << '\n';
}

void write_output_dir(const ScenarioResult& res, const ScenarioConfig& cfg, const std::string& dir, ReportFormat fmt) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  const fs::path d(dir);
  auto open = [](const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
  };
  export_report(res.report, (d / (fmt == ReportFormat::Csv ? "metrics.csv" : "metrics.json")).string(), fmt);
  {
    auto os = open(d / "verdicts.csv");
    write_verdicts_csv(res.verdicts, os);
  }
  {
    auto os = open(d / "rounds.csv");
    write_rounds_csv(res.rounds, os);
  }
  {
    auto os = open(d / "ledger.jsonl");
    chain::export_ledger_jsonl(res.ledger, os);
  }
  {
    auto os = open(d / "timing.json");
    write_timing_json(res.timing, cfg.tau_max_ms, os);
  }
  if (cfg.record_trace) {
    auto os = open(d / "trace.jsonl");
    for (const auto& r : res.trace) {
      os << ordered_json{{"time_ms", r.time_ms}, {"kind", r.kind}, {"src", r.src}, {"dst", r.dst}, {"outcome", r.outcome}}.dump()
         << '\n';
    }
  }
}

}  // namespace haven::harness
