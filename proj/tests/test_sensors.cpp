#include <doctest.h>

#include <cmath>
#include <sstream>

#include "haven/sensors/attack.hpp"
#include "haven/sensors/corpus.hpp"
#include "haven/sensors/feature_csv.hpp"
#include "haven/sensors/generator.hpp"
#include "haven/sensors/window.hpp"

using namespace haven;
using namespace haven::sensors;

TEST_CASE("window_count matches an explicit slicing loop") {
  for (std::size_t len = 1; len <= 120; ++len) {
    for (std::size_t T : {1u, 7u, 50u}) {
      for (std::size_t stride : {1u, 10u, 50u}) {
        std::size_t loop = 0;
        for (std::size_t s = 0; s + T <= len; s += stride) ++loop;
        if (len < T) continue;
        CHECK(window_count(len, T, stride) == loop);
      }
    }
  }
}

TEST_CASE("make_windows labels by any attacked sample and majority kind") {
  auto clean = generate_clean_stream(1, 0, 1000);
  REQUIRE(clean.size() == 100);
  AttackScenario s{AttackKind::LidarSpoof, 1.0, 480, 520, {0}};
  const auto stream = inject_attack(clean, 0, s, 7);
  const auto windows = make_windows(stream, 0, 50, 50);
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].is_attack);  // samples 48, 49
  CHECK(windows[1].is_attack);  // samples 50, 51
  CHECK(windows[0].attack_kind == AttackKind::LidarSpoof);
  CHECK_THROWS_AS(make_windows(stream, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_windows(stream, 0, 101, 1), std::invalid_argument);
}

TEST_CASE("clean stream is reproducible and unit-quaternion") {
  const auto a = generate_clean_stream(5, 3, 2000);
  const auto b = generate_clean_stream(5, 3, 2000);
  CHECK(a == b);
  CHECK(a != generate_clean_stream(6, 3, 2000));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].timestamp_ms == static_cast<SimTimeMs>(10 * i));
    CHECK(validate(a[i], true).empty());
  }
}

TEST_CASE("attack injection respects the half-open range and targets") {
  const auto clean = generate_clean_stream(2, 4, 1000);
  AttackScenario s{AttackKind::GpsSpoof, 0.8, 200, 400, {4}};
  const auto out = inject_attack(clean, 4, s, 9);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool inside = clean[i].timestamp_ms >= 200 && clean[i].timestamp_ms < 400;
    CHECK(out[i].label.has_value() == inside);
    if (!inside) CHECK(out[i].x == clean[i]);
  }
  const auto other = inject_attack(clean, 5, s, 9);
  for (std::size_t i = 0; i < other.size(); ++i) CHECK(!other[i].label);
}

TEST_CASE("streaming and batch perturbation agree") {
  const auto clean = generate_clean_stream(3, 1, 1000);
  AttackScenario s{AttackKind::CameraPatch, 0.6, 100, 900, {1}};
  const auto batch = inject_attack(clean, 1, s, 11);
  for (std::size_t i = 10; i < 90; ++i) CHECK(perturb_sample(clean[i], s, 1, 11) == batch[i].x);
}

TEST_CASE("feature CSV round-trips") {
  const auto stream = generate_clean_stream(4, 0, 300);
  std::stringstream ss;
  write_feature_csv(ss, stream);
  const auto back = read_feature_csv(ss);
  REQUIRE(back.size() == stream.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].timestamp_ms == stream[i].timestamp_ms);
    CHECK(back[i].pos_x == doctest::Approx(stream[i].pos_x).epsilon(1e-12));
    CHECK(back[i].actuator_response_ms == doctest::Approx(stream[i].actuator_response_ms).epsilon(1e-12));
  }
  std::stringstream bad("timestamp_ms,nope\n0,1\n");
  CHECK_THROWS_AS(read_feature_csv(bad), FeatureCsvError);
}

TEST_CASE("corpus attack share is near the requested fraction") {
  CorpusSpec spec;
  spec.vehicles = 30;
  spec.attack_fraction = 0.3;
  const auto w = generate_labeled_corpus(17, spec);
  std::size_t attacks = 0;
  for (const auto& x : w) attacks += x.is_attack;
  const double share = static_cast<double>(attacks) / static_cast<double>(w.size());
  CHECK(w.size() == 30 * 20'000 / 500);
  CHECK(share == doctest::Approx(0.3).epsilon(0.25));
}
