#include "haven/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "haven/chain/block.hpp"
#include "haven/chain/pbft.hpp"
#include "haven/chain/selective_log.hpp"
#include "haven/common/rng.hpp"
#include "haven/edge/ensemble.hpp"
#include "haven/fed/convergence.hpp"
#include "haven/fed/privacy.hpp"
#include "haven/fed/trimmed_mean.hpp"
#include "haven/harness/report_io.hpp"
#include "haven/harness/scenario.hpp"
#include "haven/harness/sweep.hpp"
#include "haven/sensors/corpus.hpp"

namespace haven::harness {

double CriterionResult::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw std::out_of_range("criterion has no value " + key);
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-22s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[96];
  std::snprintf(tail, sizeof tail, " | %.2fs (limit %.0fs)", r.seconds, r.limit_seconds);
  return std::string(head) + " measured: " + r.measured + " | bound: " + r.bound + tail;
}

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Context {
  const AcceptanceOptions& opts;
  std::optional<ScenarioResult> reference;

  ScenarioConfig reference_cfg() const {
    auto c = reference_config();
    c.seed = opts.seed;
    if (opts.theta2) c.detector.theta2 = *opts.theta2;
    if (opts.aggregation) c.federated.aggregator.rule = *opts.aggregation;
    return c;
  }

  const ScenarioResult& ref() {
    if (!reference) reference = run_scenario(reference_cfg());
    return *reference;
  }
};

// ---- 1: ensemble arithmetic ------------------------------------------------

void ensemble_math(Context&, CriterionResult& r) {
  Rng rng(0xE1);
  double worst_w = 0.0, worst_var = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> acc(3), score(3), unc(3);
    for (int i = 0; i < 3; ++i) {
      acc[i] = rng.uniform();
      score[i] = rng.uniform();
      unc[i] = rng.uniform(0.0, 0.5);
    }
    const double temp = rng.uniform(0.05, 5.0);
    // Direct evaluation, no max shift.
    double z = 0.0;
    std::vector<double> w(3);
    for (int i = 0; i < 3; ++i) z += std::exp(acc[i] / temp);
    for (int i = 0; i < 3; ++i) w[i] = std::exp(acc[i] / temp) / z;
    double yhat = 0.0, var = 0.0;
    for (int i = 0; i < 3; ++i) yhat += w[i] * score[i];
    for (int i = 0; i < 3; ++i) var += w[i] * (score[i] - yhat) * (score[i] - yhat);

    const auto ew = edge::compute_weights(acc, temp);
    std::vector<edge::ScorerOutput> outs;
    for (int i = 0; i < 3; ++i) outs.push_back({score[i], unc[i]});
    edge::DetectorConfig cfg;
    cfg.temperature = temp;
    const auto v = edge::combine(outs, ew.weights, cfg);
    for (int i = 0; i < 3; ++i) worst_w = std::max(worst_w, std::abs(ew.weights[i] - w[i]));
    worst_var = std::max(worst_var, std::abs(v.ensemble_variance - var));
  }
  r.passed = worst_w <= 1e-12 && worst_var <= 1e-9;
  r.measured = "max|dw|=" + fmt("%.2e", worst_w) + " max|dvar|=" + fmt("%.2e", worst_var) + " over 1000 triples";
  r.bound = "weights <= 1e-12, variance <= 1e-9";
  r.values = {{"max_weight_error", worst_w}, {"max_variance_error", worst_var}};
}

// ---- 2: Tier-1 latency -----------------------------------------------------

void tier1_latency(Context& ctx, CriterionResult& r) {
  const auto cfg = ctx.reference_cfg();
  const auto det = train_bootstrap(cfg);
  sensors::CorpusSpec spec;
  spec.vehicles = 250;
  spec.duration_ms = 20'000;
  spec.attack_fraction = 0.2;
  spec.glitch_rate_hz = cfg.glitch_rate_hz;
  const auto windows = sensors::generate_labeled_corpus(derive_seed(cfg.seed, {0xE2}), spec);
  const auto weights = edge::compute_weights(det.accuracies, cfg.detector.temperature);
  const auto scorers = det.scorers();
  std::vector<double> ms;
  ms.reserve(windows.size());
  for (const auto& w : windows) {
    const auto t0 = std::chrono::steady_clock::now();
    (void)edge::ensemble_predict(w.window, scorers, weights, cfg.detector);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  const double p95 = percentile(ms, 95.0);
  r.passed = ms.size() >= 10'000 && mean < cfg.tau_max_ms;
  r.measured = "mean=" + fmt("%.4f", mean) + "ms p95=" + fmt("%.4f", p95) + "ms over " + std::to_string(ms.size()) + " windows";
  r.bound = "mean < " + fmt("%.0f", cfg.tau_max_ms) + "ms";
  r.values = {{"mean_ms", mean}, {"p95_ms", p95}};
}

// ---- 3: detection quality --------------------------------------------------

void detection_quality(Context& ctx, CriterionResult& r) {
  const auto& rep = ctx.ref().report;
  r.passed = rep.accuracy >= 0.90 && rep.f1 >= 0.88;
  r.measured = "accuracy=" + fmt("%.4f", rep.accuracy) + " f1=" + fmt("%.4f", rep.f1) + " fp=" + std::to_string(rep.fp) +
               "/" + std::to_string(rep.fp + rep.tn) + " clean windows";
  r.bound = "accuracy >= 0.90, f1 >= 0.88";
  r.values = {{"accuracy", rep.accuracy}, {"f1", rep.f1}, {"fp", static_cast<double>(rep.fp)},
              {"recall", rep.recall}, {"precision", rep.precision}};
}

// ---- 4: trimmed-mean oracle ------------------------------------------------

// Brute force: for each coordinate, build the deviation list, rank it, find
// the cut with explicit linear interpolation, keep every value not above it.
std::vector<double> brute_force_trim(const std::vector<std::vector<double>>& x, double beta) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> col;
    for (const auto& row : x) col.push_back(row[j]);
    std::vector<double> s = col;
    std::sort(s.begin(), s.end());
    const double med = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    std::vector<double> dev;
    for (double v : col) dev.push_back(std::abs(v - med));
    std::vector<double> ds = dev;
    std::sort(ds.begin(), ds.end());
    const double pos = (1.0 - beta) * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    const double cut = lo + 1 < n ? ds[lo] * (1.0 - frac) + ds[lo + 1] * frac : ds[lo];
    double sum = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dev[i] <= cut) {
        sum += col[i];
        ++kept;
      }
    }
    out[j] = sum / static_cast<double>(kept);
  }
  return out;
}

void trimmed_mean_oracle(Context&, CriterionResult& r) {
  Rng rng(0xE4);
  double worst = 0.0, worst_perm = 0.0;
  for (int t = 0; t < 10'000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 12));
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const double beta = rng.uniform(0.0, 0.49);
    const bool ties = rng.bernoulli(0.3);
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    for (auto& row : x) {
      for (auto& v : row) v = ties ? static_cast<double>(rng.uniform_int(-3, 3)) : rng.normal(0.0, rng.bernoulli(0.1) ? 1e3 : 1.0);
    }
    const auto got = fed::trimmed_mean(x, beta);
    const auto want = brute_force_trim(x, beta);
    auto perm = x;
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    const auto got_perm = fed::trimmed_mean(perm, beta);
    for (std::size_t j = 0; j < d; ++j) {
      const double scale = std::max(1.0, std::abs(want[j]));
      worst = std::max(worst, std::abs(got[j] - want[j]) / scale);
      worst_perm = std::max(worst_perm, std::abs(got_perm[j] - got[j]) / scale);
    }
  }
  r.passed = worst <= 1e-12 && worst_perm <= 1e-12;
  r.measured = "max|diff|=" + fmt("%.2e", worst) + " permutation max|diff|=" + fmt("%.2e", worst_perm) + " over 10000 sets";
  r.bound = "<= 1e-12 (relative to max(1,|value|))";
  r.values = {{"max_error", worst}, {"max_permutation_error", worst_perm}};
}

// ---- 5: Byzantine convergence ----------------------------------------------

void byzantine_convergence(Context& ctx, CriterionResult& r) {
  constexpr double mu = 0.1, L = 1.0;
  constexpr std::size_t clients = 50, rounds = 100;
  const fed::ByzantineBehavior signflip{fed::ByzantineKind::SignFlip, 10.0};
  const auto robust = ctx.opts.aggregation.value_or(fed::AggregationRule::TrimmedMean);

  fed::ConvergenceOptions exact;
  exact.rule = robust;
  const auto honest = fed::convergence_oracle(clients, 0.0, signflip, mu, L, 60, ctx.opts.seed, exact);
  const double slope = fed::log_slope(honest, 0, honest.size());
  const double slope_bound = std::log(1.0 - mu / L) + 0.05;

  auto final_mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = v.size() - 10; i < v.size(); ++i) s += v[i];
    return s / 10.0;
  };
  fed::ConvergenceOptions noisy;
  noisy.gradient_noise = 0.5;
  noisy.rule = robust;
  const double free_final = final_mean(fed::convergence_oracle(clients, 0.0, signflip, mu, L, rounds, ctx.opts.seed, noisy));
  const double robust_final = final_mean(fed::convergence_oracle(clients, 0.2, signflip, mu, L, rounds, ctx.opts.seed, noisy));
  noisy.rule = fed::AggregationRule::PlainMean;
  const double plain_final = final_mean(fed::convergence_oracle(clients, 0.2, signflip, mu, L, rounds, ctx.opts.seed, noisy));

  const bool a = slope <= slope_bound;
  const bool b = robust_final <= 10.0 * free_final;
  const bool c = plain_final >= 10.0 * robust_final;
  r.passed = a && b && c;
  r.measured = "(a) slope=" + fmt("%.4f", slope) + " (b) robust/free=" + fmt("%.3g", robust_final / free_final) +
               " (c) plain/robust=" + fmt("%.3g", plain_final / robust_final);
  r.bound = "(a) <= log(1-mu/L)+0.05=" + fmt("%.4f", slope_bound) + " (b) <= 10 (c) >= 10";
  r.values = {{"slope", slope}, {"robust_over_free", robust_final / free_final}, {"plain_over_robust", plain_final / robust_final}};
}

// ---- 6: differential privacy -----------------------------------------------

void differential_privacy(Context& ctx, CriterionResult& r) {
  const auto priv = fed::PrivacyConfig::for_region(25, 1.0);
  const double b = priv.scale();
  Rng rng(derive_seed(ctx.opts.seed, {0xE6}));
  constexpr std::size_t n = 100'000;
  std::vector<double> zeros(n, 0.0);
  auto x = fed::add_laplace(zeros, priv.sensitivity, priv.epsilon, rng);
  double mean = 0.0, m2 = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double v : x) m2 += (v - mean) * (v - mean);
  const double var = m2 / static_cast<double>(n - 1);
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = x[i] < 0.0 ? 0.5 * std::exp(x[i] / b) : 1.0 - 0.5 * std::exp(-x[i] / b);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  const double ks_crit = std::sqrt(-0.5 * std::log(0.01 / 2.0)) / std::sqrt(static_cast<double>(n));
  const double var_rel = std::abs(var / (2.0 * b * b) - 1.0);

  fed::PrivacyAccountant acc(1.0, 1e-5);
  const auto basic = fed::accountant_charge(acc, 10).basic;
  fed::PrivacyAccountant acc2(0.1, 1e-5);
  const auto adv = fed::accountant_charge(acc2, 10).advanced;
  const double closed = 0.1 * std::sqrt(2.0 * 10.0 * std::log(1e5)) + 10.0 * 0.1 * (std::exp(0.1) - 1.0);
  const double adv_err = std::abs(adv - closed);

  r.passed = ks < ks_crit && var_rel <= 0.025 && basic == 10.0 && adv_err <= 1e-9;
  r.measured = "KS D=" + fmt("%.5f", ks) + " var/2b^2-1=" + fmt("%+.4f", var / (2.0 * b * b) - 1.0) +
               " basic(T=10)=" + fmt("%.17g", basic) + " |adv-closed|=" + fmt("%.1e", adv_err);
  r.bound = "D < " + fmt("%.5f", ks_crit) + " (alpha 0.01), |var err| <= 2.5%, basic = 10 exactly, adv <= 1e-9";
  r.values = {{"ks", ks}, {"ks_critical", ks_crit}, {"variance_rel_error", var_rel}, {"advanced_error", adv_err}};
}

// ---- 7: selective logging --------------------------------------------------

void selective_logging(Context& ctx, CriterionResult& r) {
  const chain::FilterConfig cfg;
  Rng rng(derive_seed(ctx.opts.seed, {0xE7}));
  std::size_t mismatches = 0;
  auto pick = [&](double boundary) { return rng.bernoulli(0.2) ? boundary : rng.uniform(); };
  for (int i = 0; i < 100'000; ++i) {
    chain::ThreatEvent e;
    e.severity = pick(0.85);
    e.consensus_confidence = pick(0.9);
    e.cross_regional_frequency = static_cast<std::uint32_t>(rng.uniform_int(0, 6));
    const bool want = (e.severity > 0.85) || (e.cross_regional_frequency > 3) || (e.consensus_confidence > 0.9);
    mismatches += chain::should_log(e, cfg) != want;
  }
  const auto& res = ctx.ref();
  std::size_t ref_mismatch = 0;
  const auto& f = ctx.reference_cfg().chain.filter;
  for (std::size_t i = 0; i < res.offered_events.size(); ++i) {
    const auto& e = res.offered_events[i];
    const bool want = (e.severity > f.severity_threshold) || (e.cross_regional_frequency > f.frequency_threshold) ||
                      (e.consensus_confidence > f.confidence_threshold);
    ref_mismatch += res.log_decisions[i] != want;
  }
  const double phi = res.report.logged_fraction;
  r.passed = mismatches == 0 && ref_mismatch == 0 && phi >= 0.03 && phi <= 0.08;
  r.measured = "mismatches=" + std::to_string(mismatches) + "/100000 reference mismatches=" + std::to_string(ref_mismatch) +
               "/" + std::to_string(res.offered_events.size()) + " phi=" + fmt("%.4f", phi);
  r.bound = "0 mismatches, phi in [0.03, 0.08]";
  r.values = {{"mismatches", static_cast<double>(mismatches + ref_mismatch)}, {"phi", phi}};
}

// ---- 8: consensus ----------------------------------------------------------

void consensus(Context& ctx, CriterionResult& r) {
  Rng rng(derive_seed(ctx.opts.seed, {0xE8}));
  std::size_t conflicts = 0, liveness_fail = 0, liveness_cases = 0, boundary_commits = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(4, 10));
    const auto f = chain::max_faults(n);
    const auto faulty = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(f)));
    const auto byz = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(faulty)));
    auto vs = chain::make_validators(n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    for (std::size_t i = 0; i < faulty; ++i) vs[idx[i]].fault_mode = i < byz ? chain::FaultMode::Byzantine : chain::FaultMode::Crashed;
    Digest d{};
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const auto out = chain::pbft_round(vs, d, static_cast<std::uint64_t>(t), rng);
    std::set<Digest> committed;
    for (const auto& [node, dig] : out.honest_commits) committed.insert(dig);
    conflicts += committed.size() > 1;
    ++liveness_cases;
    liveness_fail += !out.committed;
  }
  for (std::size_t n = 4; n <= 10; ++n) {
    auto vs = chain::make_validators(n, chain::max_faults(n) + 1);
    Digest d{};
    boundary_commits += chain::pbft_round(vs, d, 0, rng).committed;
  }
  auto messages = [&](std::size_t n) {
    auto vs = chain::make_validators(n);
    return static_cast<double>(chain::pbft_round(vs, Digest{}, 0, rng).messages);
  };
  const double m4 = messages(4), m8 = messages(8), m16 = messages(16);
  const double r1 = (m8 / m4) / 4.0, r2 = (m16 / m8) / 4.0;
  const bool scaling = std::abs(r1 - 1.0) <= 0.2 && std::abs(r2 - 1.0) <= 0.2 && m4 <= 35.0;

  auto cfg = ctx.reference_cfg();
  const auto crashed = static_cast<std::size_t>(std::floor(0.33 * static_cast<double>(cfg.chain.validators)));
  cfg.chain.crashed_validators = crashed;
  const bool applicable = crashed <= chain::max_faults(cfg.chain.validators);
  const auto res = run_scenario(cfg);
  const bool scenario_ok = !applicable || (res.report.blocks_mined > 0 && res.report.failed_consensus_rounds == 0 &&
                                           chain::verify_chain(res.ledger));

  r.passed = conflicts == 0 && liveness_fail == 0 && boundary_commits == 0 && scaling && scenario_ok;
  r.measured = "conflicts=" + std::to_string(conflicts) + " liveness_fail=" + std::to_string(liveness_fail) + "/" +
               std::to_string(liveness_cases) + " f+1_commits=" + std::to_string(boundary_commits) +
               " msgs(4,8,16)=" + fmt("%.0f", m4) + "," + fmt("%.0f", m8) + "," + fmt("%.0f", m16) +
               " n2-ratio=" + fmt("%.3f", r1) + "," + fmt("%.3f", r2) + " crashed " + std::to_string(crashed) + "/" +
               std::to_string(cfg.chain.validators) + ": blocks=" + std::to_string(res.report.blocks_mined);
  r.bound = "0 conflicts, 0 liveness failures, 0 commits at f+1 crashed, ratio within 20% of 1, scenario mines blocks";
  r.values = {{"conflicts", static_cast<double>(conflicts)}, {"liveness_failures", static_cast<double>(liveness_fail)},
              {"boundary_commits", static_cast<double>(boundary_commits)}};
}

// ---- 9: block batching -----------------------------------------------------

void block_batching(Context& ctx, CriterionResult& r) {
  Rng rng(derive_seed(ctx.opts.seed, {0xE9}));
  std::vector<chain::ThreatEvent> pending(45);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto& e = pending[i];
    for (auto& b : e.signature.digest) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    e.signature.vehicle_id = static_cast<VehicleId>(i);
    e.signature.threat_level = edge::ThreatLevel::High;
    e.severity = rng.uniform(0.86, 1.0);
    e.observed_at_ms = static_cast<SimTimeMs>(i) * 100;
  }
  std::vector<chain::Block> blocks;
  while (!pending.empty()) {
    blocks.push_back(chain::assemble_block(pending, blocks.empty() ? nullptr : &blocks.back(), 0,
                                           static_cast<SimTimeMs>(blocks.size()) * 1000, 5));
  }
  const bool valid = chain::verify_chain(blocks);

  // Every trial flips one bit of one hashed field in one block.
  std::size_t trials = 0, undetected = 0;
  for (int t = 0; t < 2000; ++t) {
    auto copy = blocks;
    auto& b = copy[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(copy.size()) - 1))];
    const int bit = static_cast<int>(rng.uniform_int(0, 7));
    auto& tx = b.transactions[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(b.transactions.size()) - 1))];
    switch (rng.uniform_int(0, 7)) {
      case 0: b.tx_digest[static_cast<std::size_t>(rng.uniform_int(0, 31))] ^= static_cast<std::uint8_t>(1u << bit); break;
      case 1: b.prev_hash[static_cast<std::size_t>(rng.uniform_int(0, 31))] ^= static_cast<std::uint8_t>(1u << bit); break;
      case 2: b.block_hash[static_cast<std::size_t>(rng.uniform_int(0, 31))] ^= static_cast<std::uint8_t>(1u << bit); break;
      case 3: tx.signature.digest[static_cast<std::size_t>(rng.uniform_int(0, 31))] ^= static_cast<std::uint8_t>(1u << bit); break;
      case 4: tx.signature.vehicle_id ^= 1u << bit; break;
      case 5: tx.observed_at_ms ^= SimTimeMs{1} << bit; break;
      case 6: b.timestamp_ms ^= SimTimeMs{1} << bit; break;
      default: tx.severity += std::ldexp(1e-6, bit); break;  // one step of the 6-decimal encoding, scaled
    }
    ++trials;
    undetected += chain::verify_chain(copy);
  }
  r.passed = blocks.size() == 9 && valid && undetected == 0;
  r.measured = "blocks=" + std::to_string(blocks.size()) + " verify=" + (valid ? "true" : "false") +
               " undetected tampers=" + std::to_string(undetected) + "/" + std::to_string(trials);
  r.bound = "9 blocks, verify true, 0 undetected";
  r.values = {{"blocks", static_cast<double>(blocks.size())}, {"undetected", static_cast<double>(undetected)}};
}

// ---- 10: scalability -------------------------------------------------------

void scalability(Context& ctx, CriterionResult& r) {
  SweepSpec spec;
  spec.base = ctx.reference_cfg();
  spec.base.federated.byzantine_ratio = 0.2;
  spec.repetitions = 1;
  const auto res = run_sweep(spec);
  const auto& t = res.trend;
  const bool ok = t.latency_below_tau && t.throughput_non_decreasing && t.accuracy_change >= -0.05;
  std::string lat, thr, acc;
  for (std::size_t i = 0; i < spec.vehicle_counts.size(); ++i) {
    lat += (i ? "," : "") + fmt("%.3f", t.latency_mean_ms[i]);
    thr += (i ? "," : "") + fmt("%.2f", t.throughput[i]);
    acc += (i ? "," : "") + fmt("%.4f", t.accuracy[i]);
  }
  r.passed = ok;
  r.measured = "latency_ms=" + lat + " throughput=" + thr + " accuracy=" + acc + " change=" + fmt("%+.4f", t.accuracy_change);
  r.bound = "latency < tau_max at all scales, throughput non-decreasing, accuracy change >= -0.05";
  r.values = {{"accuracy_change", t.accuracy_change}};
}

// ---- 11: determinism -------------------------------------------------------

std::string serialize(const ScenarioResult& res) {
  std::ostringstream os;
  write_report(res.report, os, ReportFormat::Csv);
  write_report(res.report, os, ReportFormat::Json);
  write_verdicts_csv(res.verdicts, os);
  write_rounds_csv(res.rounds, os);
  chain::export_ledger_jsonl(res.ledger, os);
  return os.str();
}

void determinism(Context& ctx, CriterionResult& r) {
  const auto first = serialize(ctx.ref());
  const auto second = serialize(run_scenario(ctx.reference_cfg()));
  auto jam = ctx.reference_cfg();
  jam.n_vehicles = 24;
  jam.record_trace = true;
  jam.attacks.scheduled.push_back({sensors::AttackKind::CommJam, 1.0, 2'000, 8'000, {0, 1, 2, 3}});
  const auto a = run_scenario(jam), b = run_scenario(jam);
  const bool same_ref = first == second;
  const bool same_jam = serialize(a) == serialize(b) && a.trace == b.trace;
  r.passed = same_ref && same_jam;
  r.measured = std::string("reference ") + (same_ref ? "identical" : "DIFFERENT") + " (" + std::to_string(first.size()) +
               " bytes), traced jam scenario " + (same_jam ? "identical" : "DIFFERENT") + " (" +
               std::to_string(a.trace.size()) + " trace records)";
  r.bound = "byte-identical reports, verdicts, rounds, ledger and traces";
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  void (*fn)(Context&, CriterionResult&);
};

constexpr Criterion kCriteria[] = {
    {1, "ensemble-math", 1, ensemble_math},
    {2, "tier1-latency", 120, tier1_latency},
    {3, "detection-quality", 300, detection_quality},
    {4, "trimmed-mean-oracle", 30, trimmed_mean_oracle},
    {5, "byzantine-convergence", 60, byzantine_convergence},
    {6, "differential-privacy", 30, differential_privacy},
    {7, "selective-logging", 60, selective_logging},
    {8, "consensus", 120, consensus},
    {9, "block-batching", 5, block_batching},
    {10, "scalability", 1800, scalability},
    {11, "determinism", 300, determinism},
};

}  // namespace

std::vector<std::string> acceptance_criteria() {
  std::vector<std::string> out;
  for (const auto& c : kCriteria) out.emplace_back(c.name);
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream* live) {
  Context ctx{opts, std::nullopt};
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!opts.filter.empty()) {
      const bool numeric = opts.filter.find_first_not_of("0123456789") == std::string::npos;
      if (numeric ? opts.filter != std::to_string(c.id) : std::string(c.name).find(opts.filter) == std::string::npos) {
        continue;
      }
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit_s;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(ctx, r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.limit_seconds) {
      r.passed = false;
      r.measured += " (runtime limit exceeded)";
    }
    if (live) *live << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace haven::harness
