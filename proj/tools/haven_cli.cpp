#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haven/common/types.hpp"
#include "haven/harness/acceptance.hpp"
#include "haven/harness/config.hpp"
#include "haven/harness/report_io.hpp"
#include "haven/harness/scenario.hpp"
#include "haven/harness/sweep.hpp"

namespace {

using namespace haven;
using namespace haven::harness;

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kAcceptance = 3 };

ScenarioConfig config_or_reference(const std::string& path) {
  return path.empty() ? reference_config() : load_config(path);
}

int cmd_run(const std::string& config, const std::string& out, const std::string& format,
            std::optional<std::uint64_t> seed) {
  auto cfg = config_or_reference(config);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  const auto fmt = report_format_from_string(format);
  const auto res = run_scenario(cfg);
  write_output_dir(res, cfg, out, fmt);
  const auto& r = res.report;
  std::printf("vehicles=%zu accuracy=%.4f f1=%.4f phi=%.4f blocks=%llu latency_mean=%.4fms -> %s\n", cfg.n_vehicles,
              r.accuracy, r.f1, r.logged_fraction, static_cast<unsigned long long>(r.blocks_mined),
              res.timing.latency_mean_ms, out.c_str());
  return kOk;
}

int cmd_sweep(const std::string& config, std::vector<std::size_t> counts, std::size_t reps, std::size_t threads,
              const std::string& out) {
  SweepSpec spec;
  spec.base = config_or_reference(config);
  spec.base.validate();
  if (!counts.empty()) spec.vehicle_counts = std::move(counts);
  spec.repetitions = reps;
  spec.threads = threads;
  spec.validate();
  const auto res = run_sweep(spec);

  std::filesystem::create_directories(out);
  std::ofstream os(std::filesystem::path(out) / "sweep.csv");
  if (!os) throw std::runtime_error("cannot write " + out + "/sweep.csv");
  os << "vehicles,repetition,accuracy,f1,throughput,logged_fraction,latency_mean_ms,latency_p95_ms\n";
  for (const auto& run : res.runs) {
    char line[256];
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", run.vehicles, run.repetition,
                  run.report.accuracy, run.report.f1, run.report.throughput_threats_per_s_per_region,
                  run.report.logged_fraction, run.timing.latency_mean_ms, run.timing.latency_p95_ms);
    os << line;
  }
  const auto& t = res.trend;
  for (std::size_t i = 0; i < spec.vehicle_counts.size(); ++i) {
    std::printf("n=%-5zu latency=%.4fms throughput=%.2f accuracy=%.4f\n", spec.vehicle_counts[i], t.latency_mean_ms[i],
                t.throughput[i], t.accuracy[i]);
  }
  std::printf("latency<tau=%s throughput_non_decreasing=%s accuracy_change=%+.4f\n",
              t.latency_below_tau ? "yes" : "no", t.throughput_non_decreasing ? "yes" : "no", t.accuracy_change);
  return kOk;
}

int cmd_acceptance(const AcceptanceOptions& opts) {
  const auto results = run_acceptance(opts, &std::cout);
  if (results.empty()) throw ConfigError("filter", "matches no criterion");
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  std::printf("%zu/%zu criteria passed\n", passed, results.size());
  return passed == results.size() ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HAVEN three-tier vehicular security simulator"};
  app.require_subcommand(1);

  std::string config, out = "out", format = "csv";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one scenario and write its outputs");
  run->add_option("--config", config, "Scenario JSON (default: reference)");
  run->add_option("--out", out, "Output directory");
  run->add_option("--format", format, "Metrics format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--seed", seed, "Override the scenario seed");

  std::vector<std::size_t> counts;
  std::size_t reps = 1, threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Scale the fleet size and summarize trends");
  sweep->add_option("--config", config, "Base scenario JSON (default: reference)");
  sweep->add_option("--counts", counts, "Vehicle counts, ascending")->delimiter(',');
  sweep->add_option("--reps", reps, "Repetitions per count");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");
  sweep->add_option("--out", out, "Output directory");

  AcceptanceOptions acc;
  double theta2 = 0.0;
  bool plain_mean = false;
  auto* accept = app.add_subcommand("acceptance", "Run the acceptance criteria");
  accept->add_option("--filter", acc.filter, "Criterion id or name substring");
  accept->add_option("--seed", acc.seed, "Scenario seed");
  auto* theta_opt = accept->add_option("--theta2", theta2, "Override the confidence threshold");
  accept->add_flag("--plain-mean", plain_mean, "Aggregate with the plain mean instead of the trimmed mean");

  std::string tmpl = "reference";
  auto* gen = app.add_subcommand("gen-config", "Print a complete scenario JSON");
  gen->add_option("--template", tmpl, "Template name")->check(CLI::IsMember({"reference"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, out, format, seed);
    if (*sweep) return cmd_sweep(config, counts, reps, threads, out);
    if (*accept) {
      if (*theta_opt) acc.theta2 = theta2;
      if (plain_mean) acc.aggregation = fed::AggregationRule::PlainMean;
      return cmd_acceptance(acc);
    }
    if (*gen) {
      std::cout << config_to_json(reference_config()) << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
