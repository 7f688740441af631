#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "haven/harness/metrics.hpp"
#include "haven/harness/scenario.hpp"

namespace haven::harness {

enum class ReportFormat { Csv, Json };

/// Throws std::invalid_argument for anything but "csv" or "json".
ReportFormat report_format_from_string(std::string_view s);

/// Column order of metrics.csv (also the JSON key set).
std::vector<std::string> report_columns();

/// CSV: a header row and one value row; reals printed with 17 significant
/// digits, series as "round:loss;..." and maps as "key:value;...".
void write_report(const MetricsReport& r, std::ostream& os, ReportFormat fmt);
MetricsReport read_report(std::istream& is, ReportFormat fmt);

/// Throws std::runtime_error on I/O failure.
void export_report(const MetricsReport& r, const std::string& path, ReportFormat fmt);
MetricsReport import_report(const std::string& path, ReportFormat fmt);

void write_verdicts_csv(const std::vector<VerdictRecord>& v, std::ostream& os);
std::vector<VerdictRecord> read_verdicts_csv(std::istream& is);
void write_rounds_csv(const std::vector<RoundRecord>& rounds, std::ostream& os);
void write_timing_json(const WallClockStats& t, double tau_max_ms, std::ostream& os);

/// Writes metrics.{csv|json}, verdicts.csv, rounds.csv, ledger.jsonl,
/// timing.json and, when traced, trace.jsonl into `dir` (created if needed).
void write_output_dir(const ScenarioResult& res, const ScenarioConfig& cfg, const std::string& dir, ReportFormat fmt);

}  // namespace haven::harness
