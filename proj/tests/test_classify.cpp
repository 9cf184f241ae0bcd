#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "gaborset/classify.hpp"
#include "gaborset/error.hpp"
#include "gaborset/image_io.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace gaborset;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kGrid{-1.0, -0.5, 0.0, 0.79, 0.8, 0.9, 1.0};

void enumerate(std::size_t n, std::vector<double>& cur, const std::function<void(const std::vector<double>&)>& fn) {
  if (cur.size() == n) {
    fn(cur);
    return;
  }
  for (double v : kGrid) {
    cur.push_back(v);
    enumerate(n, cur, fn);
    cur.pop_back();
  }
}

RawImage noisy_rgb(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RawImage img(w, h, 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() % 256);
  return img;
}

}  // namespace

TEST_CASE("decide examples") {
  const auto both = decide(std::vector<double>{0.9, 0.85});
  CHECK(both.detection_factors == std::vector<int>{1, 1});
  CHECK(both.overall_matching == 1);
  CHECK(both.verdict == Verdict::Matched);

  const auto one = decide(std::vector<double>{0.9, 0.79});
  CHECK(one.detection_factors == std::vector<int>{1, 0});
  CHECK(one.overall_matching == 0);
  CHECK(one.verdict == Verdict::Unmatched);

  CHECK(decide(std::vector<double>{0.8, 0.8, 0.8}).verdict == Verdict::Matched);
  CHECK_THROWS_AS(decide(std::vector<double>{}), Error);
}

TEST_CASE("decide agrees with the literal loop on every grid point") {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<double> cur;
    int cases = 0;
    enumerate(n, cur, [&](const std::vector<double>& out) {
      ++cases;
      const auto d = decide(out);
      REQUIRE((d.verdict == Verdict::Matched) == oracle::decision_loop_matched(out));
      int product = 1;
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(d.detection_factors[i] == (out[i] >= 0.8 ? 1 : 0));
        product *= d.detection_factors[i];
      }
      REQUIRE(d.overall_matching == product);
      bool all_low = true;
      for (double v : out) all_low = all_low && v <= -0.5;
      REQUIRE(d.confident_absence == all_low);
    });
    CHECK(cases == static_cast<int>(std::pow(7, n)));
  }
}

TEST_CASE("decide monotonicity and threshold") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng() % 3;
    auto out = oracle::random_vector(rng, n, -1.0, 1.0);
    const double t = oracle::random_vector(rng, 1, -0.5, 0.99)[0];
    const auto before = decide(out, t);
    CHECK(before.threshold == t);
    bool below = false;
    for (double v : out) below = below || v < t;
    if (below) CHECK(before.verdict == Verdict::Unmatched);
    out[rng() % n] += 0.3;
    if (before.verdict == Verdict::Matched) CHECK(decide(out, t).verdict == Verdict::Matched);
  }
}

TEST_CASE("scan mode names") {
  CHECK(scan_mode_from_string("off") == ScanMode::Off);
  CHECK(scan_mode_from_string("grid3") == ScanMode::Grid3);
  CHECK(std::string(to_string(ScanMode::Grid3)) == "grid3");
  CHECK_THROWS_AS(scan_mode_from_string("grid4"), Error);
}

TEST_CASE("classify_image") {
  const ScratchDir scratch("classify");
  const fs::path dir = scratch.path();
  const GaborBank bank = make_bank({0.1, 0.25}, {0.0, 1.5}, 7, 1.0);
  PreprocessParams params;
  params.size = 32;
  const FeatureExtractor extractor(bank, params.size);
  MlpModel model = init_model(8, 3, 2, 4);

  write_png(dir / "a.png", noisy_rgb(40, 30, 1));
  std::ofstream(dir / "broken.png") << "not an image";

  SUBCASE("deterministic on the same file") {
    const auto a = classify_image(dir / "a.png", model, extractor, params);
    const auto b = classify_image(dir / "a.png", model, extractor, params);
    CHECK(a == b);
    CHECK(a.outputs.size() == 2);
  }
  SUBCASE("bias-dominated model") {
    MlpModel on(8, 3, 2);
    on.b2 = {3.0, 3.0};
    CHECK(classify_image(dir / "a.png", on, extractor, params).verdict == Verdict::Matched);
    on.b2 = {3.0, -3.0};
    CHECK(classify_image(dir / "a.png", on, extractor, params).verdict == Verdict::Unmatched);
  }
  SUBCASE("grid3 takes the per-neuron maximum over views") {
    const RawImage img = read_image(dir / "a.png");
    const auto whole = score_image(img, model, extractor, params, ScanMode::Off);
    const auto scan = score_image(img, model, extractor, params, ScanMode::Grid3);
    for (std::size_t i = 0; i < whole.size(); ++i) CHECK(scan[i] >= whole[i]);
  }
  SUBCASE("unreadable files are reported as skipped") {
    try {
      classify_image(dir / "broken.png", model, extractor, params);
      FAIL("expected SkippedImage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SkippedImage);
    }
    try {
      classify_image(dir / "missing.png", model, extractor, params);
      FAIL("expected SkippedImage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SkippedImage);
    }
  }
  SUBCASE("model and bank must agree") {
    const MlpModel wrong = init_model(100, 3, 2, 1);
    CHECK_THROWS_AS(classify_image(dir / "a.png", wrong, extractor, params), Error);
  }
}
