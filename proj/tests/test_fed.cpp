#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "haven/common/rng.hpp"
#include "haven/fed/aggregator.hpp"
#include "haven/fed/byzantine.hpp"
#include "haven/fed/convergence.hpp"
#include "haven/fed/local_train.hpp"
#include "haven/fed/privacy.hpp"
#include "haven/fed/trimmed_mean.hpp"

using namespace haven;
using namespace haven::fed;

namespace {

// Independent reference: rank deviations by counting, interpolate by hand.
double oracle_trim_1d(std::vector<double> col, double beta) {
  const std::size_t n = col.size();
  std::vector<double> s = col;
  std::sort(s.begin(), s.end());
  const double med = n % 2 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2;
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::fabs(col[i] - med);
  std::vector<double> ds = dev;
  std::sort(ds.begin(), ds.end());
  const double h = (n - 1) * (1 - beta);
  const auto k = static_cast<std::size_t>(std::floor(h));
  const double cut = k + 1 < n ? ds[k] + (h - k) * (ds[k + 1] - ds[k]) : ds[k];
  double sum = 0;
  int kept = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (dev[i] <= cut) sum += col[i], ++kept;
  return sum / kept;
}

}  // namespace

TEST_CASE("quantile matches type-7 by hand") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({1, 2, 3, 4}, 0.0) == 1);
  CHECK(quantile({1, 2, 3, 4}, 1.0) == 4);
  CHECK(quantile({10, 0, 5}, 0.25) == doctest::Approx(2.5));
  CHECK(median({3, 1, 2}) == 2);
}

TEST_CASE("trimmed mean equals the brute-force oracle") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(3, 15));
    const double beta = rng.uniform(0.0, 0.45);
    std::vector<std::vector<double>> x(n, std::vector<double>(1));
    for (auto& r : x) r[0] = rng.bernoulli(0.5) ? static_cast<double>(rng.uniform_int(0, 2)) : rng.normal(0, 5);
    std::vector<double> col;
    for (auto& r : x) col.push_back(r[0]);
    CHECK(trimmed_mean(x, beta)[0] == doctest::Approx(oracle_trim_1d(col, beta)).epsilon(1e-12));
  }
}

TEST_CASE("trimmed mean removes an outlier and reports who was trimmed") {
  std::vector<std::vector<double>> x{{1.0}, {1.1}, {0.9}, {1.0}, {100.0}};
  const auto r = trimmed_mean_detailed(x, 0.2);
  CHECK(r.mean[0] == doctest::Approx(1.0));
  CHECK(r.survivors[0] == 4);
  CHECK(r.trimmed_fraction[4] == 1.0);
  CHECK(r.trimmed_fraction[0] == 0.0);
  CHECK_THROWS_AS(trimmed_mean(std::vector<std::vector<double>>{{1}, {2}}, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(trimmed_mean(x, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(trimmed_mean(std::vector<std::vector<double>>{{1}, {2}, {3, 4}}, 0.2), std::invalid_argument);
}

TEST_CASE("zero trim ratio keeps everything") {
  std::vector<std::vector<double>> x{{1, 5}, {2, 6}, {9, 7}};
  const auto m = trimmed_mean(x, 0.0);
  CHECK(m[0] == doctest::Approx(4.0));
  CHECK(m[1] == doctest::Approx(6.0));
}

TEST_CASE("logistic gradient matches central finite differences") {
  Rng rng(4);
  std::vector<std::vector<double>> rows(30, std::vector<double>(4));
  std::vector<int> labels(30);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto& v : rows[i]) v = rng.normal();
    labels[i] = static_cast<int>(rng.uniform_int(0, 1));
  }
  LogisticObjective obj(rows, labels);
  std::vector<double> w(obj.dim());
  for (auto& v : w) v = rng.normal(0, 0.5);
  const auto g = obj.gradient(w);
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto p = w, m = w;
    p[j] += 1e-6;
    m[j] -= 1e-6;
    CHECK(g[j] == doctest::Approx((obj.loss(p) - obj.loss(m)) / 2e-6).epsilon(1e-6));
  }
  // Flipped labels.
  const auto f = obj.flipped();
  for (std::size_t i = 0; i < labels.size(); ++i) CHECK(f.labels()[i] == 1 - labels[i]);
}

TEST_CASE("local_train takes one gradient step") {
  QuadraticObjective q({1.0, -2.0}, {2.0, 0.5});
  GlobalModel g{{0.0, 0.0}, 3};
  const auto u = local_train(g, q, 0.1, 5);
  CHECK(u.delta[0] == doctest::Approx(0.2));   // -0.1 * 2 * (0 - 1)
  CHECK(u.delta[1] == doctest::Approx(-0.1));  // -0.1 * 0.5 * (0 + 2)
  CHECK(u.round == 3);
  CHECK(u.vehicle_id == 5);
  CHECK_THROWS_AS(local_train(g, q, 0.0), std::invalid_argument);
}

TEST_CASE("byzantine updates") {
  Rng rng(1);
  ClientUpdate h{1, {1.0, -2.0}, 1, 0};
  auto s = byzantine_update({ByzantineKind::SignFlip, 3.0}, h, rng);
  CHECK(s.delta[0] == doctest::Approx(-3.0));
  CHECK(s.delta[1] == doctest::Approx(6.0));
  auto l = byzantine_update({ByzantineKind::LargeNorm, 10.0}, h, rng);
  CHECK(l2_norm(l.delta) > l2_norm(h.delta));
  CHECK_THROWS(byzantine_update({ByzantineKind::LabelFlip, 1.0}, h, rng));
  for (auto k : {ByzantineKind::SignFlip, ByzantineKind::LargeNorm, ByzantineKind::RandomNoise, ByzantineKind::LabelFlip})
    CHECK(byzantine_kind_from_string(to_string(k)) == k);
}

TEST_CASE("laplace sampler passes KS and variance checks") {
  Rng rng(8);
  const double b = 0.5;
  std::vector<double> x(20000);
  for (auto& v : x) v = sample_laplace(b, rng);
  std::sort(x.begin(), x.end());
  double d = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    // CDF written out, not via laplace_cdf.
    const double F = x[i] < 0 ? 0.5 * std::exp(x[i] / b) : 1 - 0.5 * std::exp(-x[i] / b);
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  CHECK(d < 1.6276 / std::sqrt(n));
  double m2 = 0;
  for (double v : x) m2 += v * v;
  CHECK(m2 / n == doctest::Approx(2 * b * b).epsilon(0.05));
  CHECK(laplace_cdf(0.0, b) == doctest::Approx(0.5));
}

TEST_CASE("privacy config and composition") {
  const auto p = PrivacyConfig::for_region(20, 2.0);
  CHECK(p.sensitivity == doctest::Approx(0.05));
  CHECK(p.scale() == doctest::Approx(0.025));
  Rng rng(2);
  std::vector<double> v{1, 2, 3};
  CHECK(add_laplace(v, 1.0, 1.0, rng, true) == v);
  PrivacyAccountant acc(0.5, 1e-6);
  const auto b = acc.charge(4);
  CHECK(b.basic == doctest::Approx(2.0));
  CHECK(b.advanced == doctest::Approx(0.5 * std::sqrt(8 * std::log(1e6)) + 4 * 0.5 * (std::exp(0.5) - 1)));
  CHECK(acc.rounds_used() == 4);
  PrivacyConfig bad;
  bad.epsilon = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("aggregate_round filters bad updates and charges one round") {
  GlobalModel g{{0.0, 0.0}, 2};
  std::vector<ClientUpdate> in{{1, {1, 1}, 1, 2}, {2, {1.2, 0.8}, 1, 2}, {3, {0.9, 1.1}, 1, 2},
                               {4, {NAN, 0}, 1, 2}, {5, {1, 1}, 1, 1},     {6, {1}, 1, 2}};
  AggregatorConfig agg;
  agg.learning_rate = 1.0;
  PrivacyConfig priv;
  priv.zero_noise = true;
  PrivacyAccountant acc;
  Rng rng(0);
  const auto r = aggregate_round(g, in, agg, priv, acc, rng);
  CHECK(r.summary.rejected == 3);
  CHECK(r.summary.aggregated == 3);
  CHECK(r.model.round == 3);
  CHECK(acc.rounds_used() == 1);
  CHECK(std::accumulate(r.model.weights.begin(), r.model.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(0.05));
  std::vector<ClientUpdate> none{{4, {NAN, 0}, 1, 2}};
  CHECK_THROWS(aggregate_round(g, none, agg, priv, acc, rng));
}

TEST_CASE("convergence oracle: trimmed mean survives sign flips, plain mean does not") {
  ConvergenceOptions o;
  o.gradient_noise = 0.5;
  const ByzantineBehavior b{ByzantineKind::SignFlip, 10.0};
  const auto robust = convergence_oracle(30, 0.2, b, 0.1, 1.0, 60, 1, o);
  o.rule = AggregationRule::PlainMean;
  const auto plain = convergence_oracle(30, 0.2, b, 0.1, 1.0, 60, 1, o);
  CHECK(robust.size() == 61);
  CHECK(robust.back() < robust.front());
  CHECK(plain.back() > robust.back() * 10);
  CHECK_THROWS(convergence_oracle(30, 0.4, b, 0.1, 1.0, 10, 1, ConvergenceOptions{}));
  CHECK(log_slope(std::vector<double>{1.0, 0.5, 0.25, 0.125}, 0, 4) == doctest::Approx(std::log(0.5)));
}
