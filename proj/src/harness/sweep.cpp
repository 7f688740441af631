#include "haven/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "haven/harness/scenario.hpp"

namespace haven::harness {

void SweepSpec::validate() const {
  if (vehicle_counts.empty()) throw ConfigError("counts", "must not be empty");
  for (std::size_t i = 1; i < vehicle_counts.size(); ++i) {
    if (vehicle_counts[i] <= vehicle_counts[i - 1]) throw ConfigError("counts", "must be strictly ascending");
  }
  if (repetitions == 0) throw ConfigError("reps", "must be >= 1");
  base.validate();
}

TrendSummary summarize_trend(const std::vector<SweepRun>& runs, const std::vector<std::size_t>& counts, double tau_max_ms) {
  TrendSummary t;
  for (auto n : counts) {
    double lat = 0.0, thr = 0.0, acc = 0.0;
    std::size_t m = 0;
    for (const auto& r : runs) {
      if (r.vehicles != n) continue;
      lat += r.timing.latency_mean_ms;
      thr += r.report.throughput_threats_per_s_per_region;
      acc += r.report.accuracy;
      ++m;
    }
    const double d = m ? static_cast<double>(m) : 1.0;
    t.latency_mean_ms.push_back(lat / d);
    t.throughput.push_back(thr / d);
    t.accuracy.push_back(acc / d);
  }
  for (double l : t.latency_mean_ms) t.latency_below_tau = t.latency_below_tau && l < tau_max_ms;
  for (std::size_t i = 1; i < t.throughput.size(); ++i) {
    t.throughput_non_decreasing = t.throughput_non_decreasing && t.throughput[i] >= t.throughput[i - 1];
  }
  if (!t.accuracy.empty()) t.accuracy_change = t.accuracy.back() - t.accuracy.front();
  return t;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<edge::TrainedDetector> detectors;
  for (std::size_t r = 0; r < spec.repetitions; ++r) {
    auto cfg = spec.base;
    cfg.seed = spec.base.seed + r;
    detectors.push_back(train_bootstrap(cfg));
  }

  SweepResult out;
  for (auto n : spec.vehicle_counts) {
    for (std::size_t r = 0; r < spec.repetitions; ++r) out.runs.push_back({n, r, {}, {}});
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < out.runs.size(); i = next++) {
      try {
        auto& run = out.runs[i];
        auto cfg = spec.base;
        cfg.n_vehicles = run.vehicles;
        cfg.seed = spec.base.seed + run.repetition;
        auto res = run_scenario(cfg, detectors[run.repetition]);
        run.report = std::move(res.report);
        run.timing = res.timing;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, out.runs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  out.trend = summarize_trend(out.runs, spec.vehicle_counts, spec.base.tau_max_ms);
  return out;
}

}  // namespace haven::harness
