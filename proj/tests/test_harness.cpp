#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "haven/chain/block.hpp"
#include "haven/common/types.hpp"
#include "haven/harness/config.hpp"
#include "haven/harness/metrics.hpp"
#include "haven/harness/report_io.hpp"
#include "haven/harness/scenario.hpp"

#include <json.hpp>

using namespace haven;
using namespace haven::harness;

namespace {

ScenarioConfig small_config() {
  auto c = reference_config();
  c.n_vehicles = 24;
  c.duration_s = 10;
  return c;
}

const ScenarioResult& small_run() {
  static const ScenarioResult r = run_scenario(small_config());
  return r;
}

}  // namespace

TEST_CASE("config JSON round-trips") {
  const auto c = reference_config();
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("config rejects unknown keys and bad values with the field name") {
  auto j = nlohmann::json::parse(config_to_json(reference_config()));
  j["detector"]["theta3"] = 0.5;
  try {
    config_from_json(j.dump());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field().find("theta3") != std::string::npos);
  }
  j = nlohmann::json::parse(config_to_json(reference_config()));
  j["n_regions"] = 0;
  CHECK_THROWS_AS(config_from_json(j.dump()), ConfigError);
  j = nlohmann::json::parse(config_to_json(reference_config()));
  j["federated"]["byzantine_ratio"] = 0.4;
  CHECK_THROWS_AS(config_from_json(j.dump()), ConfigError);
  j = nlohmann::json::parse(config_to_json(reference_config()));
  j["seed"] = "forty-two";
  CHECK_THROWS_AS(config_from_json(j.dump()), ConfigError);
  CHECK_THROWS_AS(config_from_json("{not json"), ConfigError);
}

TEST_CASE("scores from a hand-built confusion") {
  const auto s = scores_from({8, 2, 85, 5});
  CHECK(s.accuracy == doctest::Approx(0.93));
  CHECK(s.precision == doctest::Approx(0.8));
  CHECK(s.recall == doctest::Approx(8.0 / 13.0));
  CHECK(s.f1 == doctest::Approx(2 * 0.8 * (8.0 / 13) / (0.8 + 8.0 / 13)));
  const auto none = scores_from({0, 0, 10, 0});
  CHECK_FALSE(none.precision_defined);
  CHECK_FALSE(none.recall_defined);
  CHECK(none.precision == 1.0);
}

TEST_CASE("percentile and convergence round") {
  CHECK(percentile({5, 1, 3, 2, 4}, 50) == 3);
  CHECK(percentile({5, 1, 3, 2, 4}, 100) == 5);
  CHECK(percentile({}, 95) == 0);
  std::vector<std::pair<std::uint64_t, double>> s{{0, 10}, {1, 3}, {2, 1.04}, {3, 1.01}, {4, 1.0}};
  CHECK(rounds_to_converge(s) == 2);
}

TEST_CASE("report confusion equals a recount of the verdicts") {
  const auto& r = small_run();
  Confusion c;
  for (const auto& v : r.verdicts) {
    if (v.truth && v.predicted) ++c.tp;
    else if (!v.truth && v.predicted) ++c.fp;
    else if (!v.truth) ++c.tn;
    else ++c.fn;
  }
  CHECK(c.tp == r.report.tp);
  CHECK(c.fp == r.report.fp);
  CHECK(c.tn == r.report.tn);
  CHECK(c.fn == r.report.fn);
  CHECK(r.report.windows == r.verdicts.size());
  // Every vehicle gets one verdict per 500 ms window.
  CHECK(r.verdicts.size() == 24 * 20);
}

TEST_CASE("ledger and logging bookkeeping") {
  const auto& r = small_run();
  CHECK(chain::verify_chain(r.ledger));
  std::size_t txs = 0;
  for (const auto& b : r.ledger) txs += b.transactions.size();
  std::size_t logged = 0;
  for (bool d : r.log_decisions) logged += d;
  CHECK(txs <= logged);
  CHECK(r.offered_events.size() == r.log_decisions.size());
  CHECK(r.report.logged_events == logged);
  CHECK(r.report.blocks_mined == r.ledger.size());
}

TEST_CASE("metrics report round-trips through CSV and JSON") {
  const auto& r = small_run();
  for (auto fmt : {ReportFormat::Csv, ReportFormat::Json}) {
    std::stringstream ss;
    write_report(r.report, ss, fmt);
    CHECK(read_report(ss, fmt) == r.report);
  }
  std::stringstream vs;
  write_verdicts_csv(r.verdicts, vs);
  CHECK(read_verdicts_csv(vs) == r.verdicts);
  CHECK_THROWS_AS(report_format_from_string("xml"), std::invalid_argument);
}

TEST_CASE("output directory contents") {
  const auto dir = std::filesystem::temp_directory_path() / "haven_test_out";
  std::filesystem::remove_all(dir);
  write_output_dir(small_run(), small_config(), dir.string(), ReportFormat::Csv);
  for (const char* f : {"metrics.csv", "verdicts.csv", "rounds.csv", "ledger.jsonl", "timing.json"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK_FALSE(std::filesystem::exists(dir / "trace.jsonl"));
  CHECK(import_report((dir / "metrics.csv").string(), ReportFormat::Csv) == small_run().report);
  std::filesystem::remove_all(dir);
}

TEST_CASE("same seed, same outcome; different seed, different outcome") {
  const auto again = run_scenario(small_config());
  CHECK(again.report == small_run().report);
  CHECK(again.verdicts == small_run().verdicts);
  auto other = small_config();
  other.seed = 7;
  CHECK_FALSE(run_scenario(other).verdicts == small_run().verdicts);
}

TEST_CASE("FL rounds run and the privacy budget grows") {
  const auto& r = small_run();
  REQUIRE(!r.rounds.empty());
  double prev = 0;
  for (const auto& rr : r.rounds) {
    if (rr.region_id != 0) continue;
    CHECK(rr.budget_basic >= prev);
    prev = rr.budget_basic;
  }
  CHECK(r.report.fl_rounds > 0);
}

TEST_CASE("comm jam lowers delivery") {
  auto c = small_config();
  c.attacks.window_fraction = 0;
  const auto quiet = run_scenario(c);
  c.attacks.scheduled.push_back({sensors::AttackKind::CommJam, 1.0, 1000, 9000, {0, 1, 2, 3, 4, 5}});
  const auto jammed = run_scenario(c);
  CHECK(jammed.report.drop_count > quiet.report.drop_count);
}
