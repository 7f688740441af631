#include <doctest.h>

#include <cmath>

#include "haven/common/digest.hpp"
#include "haven/common/rng.hpp"
#include "haven/edge/ensemble.hpp"
#include "haven/edge/threat.hpp"
#include "haven/edge/training.hpp"
#include "haven/sensors/corpus.hpp"

using namespace haven;
using namespace haven::edge;

TEST_CASE("softmax weights against a direct evaluation") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a{rng.uniform(), rng.uniform(), rng.uniform()};
    const double T = rng.uniform(0.1, 3.0);
    const auto w = compute_weights(a, T);
    const double z = std::exp(a[0] / T) + std::exp(a[1] / T) + std::exp(a[2] / T);
    for (int i = 0; i < 3; ++i) CHECK(w.weights[i] == doctest::Approx(std::exp(a[i] / T) / z).epsilon(1e-12));
  }
  CHECK_THROWS_AS(compute_weights(std::vector<double>{0.5}, 0.0), std::invalid_argument);
}

TEST_CASE("equal accuracies give uniform weights at any temperature") {
  for (double T : {0.01, 1.0, 100.0}) {
    const auto w = compute_weights(std::vector<double>{0.9, 0.9, 0.9}, T);
    for (double x : w.weights) CHECK(x == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("combine applies the dual threshold") {
  const std::vector<double> w{1.0 / 3, 1.0 / 3, 1.0 / 3};
  DetectorConfig cfg;
  // Unanimous high score, low uncertainty: anomaly.
  std::vector<ScorerOutput> hi{{0.95, 0.01}, {0.95, 0.01}, {0.95, 0.01}};
  auto v = combine(hi, w, cfg);
  CHECK(v.anomaly_score == doctest::Approx(0.95));
  CHECK(v.is_anomaly);
  CHECK(v.severity == doctest::Approx(v.anomaly_score));
  CHECK(v.threat_level == ThreatLevel::High);
  // Score at the threshold itself is not above it.
  std::vector<ScorerOutput> edge{{0.7, 0.0}, {0.7, 0.0}, {0.7, 0.0}};
  CHECK_FALSE(combine(edge, w, cfg).is_anomaly);
  // High score but uncertain scorers: the confidence gate rejects it.
  std::vector<ScorerOutput> unsure{{0.9, 0.5}, {0.9, 0.5}, {0.9, 0.5}};
  v = combine(unsure, w, cfg);
  CHECK(v.anomaly_score > cfg.theta1);
  CHECK(v.confidence == doctest::Approx(0.5));
  CHECK_FALSE(v.is_anomaly);
  // Disagreement shows up in the variance, not the confidence.
  std::vector<ScorerOutput> split{{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  v = combine(split, w, cfg);
  CHECK(v.ensemble_variance == doctest::Approx(2.0 / 9.0));
  CHECK(v.confidence == doctest::Approx(1.0));
  CHECK_THROWS_AS(combine(split, std::vector<double>{1.0}, cfg), std::invalid_argument);
}

TEST_CASE("threat level bands") {
  CHECK(threat_level_for(0.0) == ThreatLevel::Low);
  CHECK(threat_level_for(0.6999) == ThreatLevel::Low);
  CHECK(threat_level_for(0.7) == ThreatLevel::Medium);
  CHECK(threat_level_for(0.8499) == ThreatLevel::Medium);
  CHECK(threat_level_for(0.85) == ThreatLevel::High);
}

TEST_CASE("sha256 known vectors") {
  const std::string abc = "abc";
  CHECK(to_hex(sha256({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()})) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(sha256({})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto d = digest_from_hex(to_hex(sha256({})));
  CHECK(to_hex(d) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK_THROWS_AS(digest_from_hex("zz"), std::invalid_argument);
}

TEST_CASE("signature digest is sensitive to every encoded field") {
  Summary s{};
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.1 * static_cast<double>(i);
  const auto base = make_signature(s, ThreatLevel::High, 7, 1000, ThreatClass::GpsSpoof, 0.9, 2);
  CHECK(make_signature(s, ThreatLevel::High, 7, 1000, ThreatClass::GpsSpoof, 0.9, 2).digest == base.digest);
  CHECK(make_signature(s, ThreatLevel::Medium, 7, 1000, ThreatClass::GpsSpoof, 0.9, 2).digest != base.digest);
  CHECK(make_signature(s, ThreatLevel::High, 8, 1000, ThreatClass::GpsSpoof, 0.9, 2).digest != base.digest);
  CHECK(make_signature(s, ThreatLevel::High, 7, 1001, ThreatClass::GpsSpoof, 0.9, 2).digest != base.digest);
  auto s2 = s;
  s2[0] += 1e-6;
  CHECK(make_signature(s2, ThreatLevel::High, 7, 1000, ThreatClass::GpsSpoof, 0.9, 2).digest != base.digest);
  // Pattern key ignores the vehicle and time.
  CHECK(make_signature(s2, ThreatLevel::High, 9, 5000, ThreatClass::GpsSpoof, 0.9, 1).pattern_key == base.pattern_key);
  CHECK(pattern_key_for(ThreatClass::LidarSpoof, 0.9) != base.pattern_key);
}

TEST_CASE("trained scorers beat chance on held-out windows") {
  sensors::CorpusSpec spec;
  spec.vehicles = 20;
  const auto det = train_base_scorers(sensors::generate_labeled_corpus(5, spec), 5);
  for (double a : det.accuracies) CHECK(a > 0.8);
  sensors::CorpusSpec held = spec;
  const auto test = to_training_set(sensors::generate_labeled_corpus(99, held));
  CHECK(holdout_accuracy(*det.forest, test) > 0.8);
  CHECK(holdout_accuracy(*det.margin, test) > 0.8);
}
