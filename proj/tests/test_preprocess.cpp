#include <doctest.h>

#include <algorithm>
#include <random>

#include "gaborset/error.hpp"
#include "gaborset/preprocess.hpp"
#include "oracles.hpp"

using namespace gaborset;

namespace {

RawImage gray_from(int w, int h, const std::vector<int>& values) {
  RawImage img(w, h, 1);
  for (std::size_t i = 0; i < values.size(); ++i) img.data[i] = static_cast<std::uint8_t>(values[i]);
  return img;
}

GrayImage random_gray(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  GrayImage img(side);
  for (double& v : img.data) v = dist(rng);
  return img;
}

}  // namespace

TEST_CASE("to_grayscale") {
  SUBCASE("single channel is returned unchanged") {
    const RawImage img = gray_from(3, 1, {0, 17, 255});
    CHECK(to_grayscale(img).data == img.data);
  }
  SUBCASE("white stays white") {
    RawImage img(1, 1, 3);
    img.data = {255, 255, 255};
    CHECK(to_grayscale(img).data[0] == 255);
  }
  SUBCASE("luma weights") {
    RawImage img(1, 1, 3);
    img.data = {100, 150, 200};
    // 0.299*100 + 0.587*150 + 0.114*200 = 140.75
    CHECK(to_grayscale(img).data[0] == 141);
  }
  SUBCASE("unsupported channel counts") {
    RawImage img(2, 2, 1);
    img.channels = 2;
    img.data.resize(8);
    CHECK_THROWS_AS(to_grayscale(img), Error);
    RawImage short_buffer(2, 2, 3);
    short_buffer.data.pop_back();
    CHECK_THROWS_AS(to_grayscale(short_buffer), Error);
  }
}

TEST_CASE("resize") {
  SUBCASE("same size is the identity") {
    std::vector<int> v(64);
    for (int i = 0; i < 64; ++i) v[static_cast<std::size_t>(i)] = (i * 37) % 256;
    const GrayImage out = resize(gray_from(8, 8, v), 8);
    for (int i = 0; i < 64; ++i) CHECK(out.data[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(i)]);
  }
  SUBCASE("constant input stays constant") {
    const GrayImage out = resize(gray_from(5, 3, std::vector<int>(15, 42)), 16);
    for (double v : out.data) CHECK(v == 42.0);
  }
  SUBCASE("2x2 checkerboard to 4x4") {
    // Source coordinates per axis: 0 (clamped), 0.25, 0.75, 1 (clamped).
    // v(y, x) = 255 * ((1-y) x + y (1-x)) on the unit square.
    const double expected[4][4] = {
        {0.0, 63.75, 191.25, 255.0},
        {63.75, 95.625, 159.375, 191.25},
        {191.25, 159.375, 95.625, 63.75},
        {255.0, 191.25, 63.75, 0.0},
    };
    const GrayImage out = resize(gray_from(2, 2, {0, 255, 255, 0}), 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) CHECK(out(r, c) == doctest::Approx(expected[r][c]).epsilon(1e-12));
    }
    const double centre = (out(1, 1) + out(1, 2) + out(2, 1) + out(2, 2)) / 4.0;
    CHECK(centre == doctest::Approx(127.5).epsilon(1e-12));
  }
  SUBCASE("colour input is rejected") {
    CHECK_THROWS_AS(resize(RawImage(2, 2, 3), 8), Error);
  }
}

TEST_CASE("crop_fraction") {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i;
  const RawImage img = gray_from(10, 10, v);
  const RawImage crop = crop_fraction(img, 0.5, 0.2, 0.3, 0.5);
  CHECK(crop.width == 3);
  CHECK(crop.height == 5);
  CHECK(crop.at(0, 0) == 25);
  CHECK(crop.at(4, 2) == 67);
  const RawImage tiny = crop_fraction(img, 0.99, 0.99, 0.001, 0.001);
  CHECK(tiny.width == 1);
  CHECK(tiny.height == 1);
}

TEST_CASE("equalize_adaptive") {
  const AheParams defaults;

  SUBCASE("constant image is unchanged") {
    const GrayImage img(32, 77.25);
    CHECK(equalize_adaptive(img, defaults) == img);
  }

  SUBCASE("single unclipped tile matches global histogram equalization") {
    const int side = 128;
    GrayImage ramp(side);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) ramp(r, c) = std::round(255.0 * c / (side - 1));
    }
    const AheParams global{1, 1, 1.0, 256};
    const GrayImage got = equalize_adaptive(ramp, global);
    const GrayImage want = oracle::global_equalize(ramp);
    for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(std::abs(got.data[i] - want.data[i]) <= 1.0);
  }

  SUBCASE("output stays in [0, 255] and is deterministic") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GrayImage img = random_gray(64, seed);
      const GrayImage a = equalize_adaptive(img, defaults);
      const GrayImage b = equalize_adaptive(img, defaults);
      CHECK(a == b);
      CHECK(*std::min_element(a.data.begin(), a.data.end()) >= 0.0);
      CHECK(*std::max_element(a.data.begin(), a.data.end()) <= 255.0);
    }
  }

  SUBCASE("tile mappings are monotone") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(30.0, 200.0);
    std::vector<double> pixels(256);
    for (double& p : pixels) p = dist(rng);
    for (double clip : {0.01, 0.05, 1.0}) {
      const auto m = detail::build_tile_mapping(pixels, AheParams{8, 8, clip, 256});
      REQUIRE_FALSE(m.identity);
      CHECK(std::is_sorted(m.lut.begin(), m.lut.end()));
      CHECK(m.lut.back() == doctest::Approx(255.0));
    }
  }

  SUBCASE("rank order preserved inside a single tile") {
    const GrayImage img = random_gray(32, 3);
    const GrayImage out = equalize_adaptive(img, AheParams{1, 1, 0.02, 256});
    std::vector<std::size_t> idx(img.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return img.data[a] < img.data[b]; });
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(out.data[idx[i - 1]] <= out.data[idx[i]]);
  }

  SUBCASE("degenerate tile keeps identity next to busy tiles") {
    GrayImage img(16, 100.0);
    for (int r = 0; r < 16; ++r) {
      for (int c = 8; c < 16; ++c) img(r, c) = (r * 16 + c) % 200;
    }
    const auto left = detail::build_tile_mapping(std::vector<double>(64, 100.0), defaults);
    CHECK(left.identity);
    const GrayImage out = equalize_adaptive(img, AheParams{2, 2, 0.01, 256});
    CHECK(out(0, 0) == 100.0);
  }

  SUBCASE("invalid parameters") {
    const GrayImage img(16, 1.0);
    CHECK_THROWS_AS(equalize_adaptive(img, AheParams{0, 1, 0.5, 256}), Error);
    CHECK_THROWS_AS(equalize_adaptive(img, AheParams{1, 1, 0.0, 256}), Error);
    CHECK_THROWS_AS(equalize_adaptive(img, AheParams{1, 1, 0.5, 1}), Error);
  }
}

TEST_CASE("normalize") {
  SUBCASE("midpoint of a full-range image") {
    GrayImage img(8, 127.5);
    img(0, 0) = 0.0;
    img(0, 1) = 255.0;
    const GrayImage out = normalize(img);
    CHECK(out(0, 0) == -1.0);
    CHECK(out(0, 1) == 1.0);
    CHECK(out(3, 3) == 0.0);
  }
  SUBCASE("constant image maps to zeros") {
    const GrayImage out = normalize(GrayImage(8, 42.0));
    for (double v : out.data) CHECK(v == 0.0);
  }
  SUBCASE("interior value") {
    GrayImage img(8, 100.0);
    img(0, 0) = 50.0;
    img(0, 1) = 150.0;
    img(2, 2) = 75.0;
    CHECK(normalize(img)(2, 2) == doctest::Approx(-0.5).epsilon(1e-15));
  }
  SUBCASE("fixpoint: a normalized image normalizes to itself") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GrayImage once = normalize(random_gray(16, seed));
      const GrayImage twice = normalize(once);
      for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice.data[i] == doctest::Approx(once.data[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("full preprocessing chain") {
  RawImage colour(40, 30, 3);
  std::mt19937_64 rng(5);
  for (auto& v : colour.data) v = static_cast<std::uint8_t>(rng() % 256);
  const PreprocessParams params;
  const GrayImage out = preprocess(colour, params);
  CHECK(out.side == 128);
  CHECK(*std::min_element(out.data.begin(), out.data.end()) == -1.0);
  CHECK(*std::max_element(out.data.begin(), out.data.end()) == 1.0);
  CHECK(preprocess(colour, params) == out);

  PreprocessParams bad;
  bad.size = 4;
  CHECK_THROWS_AS(preprocess(colour, bad), Error);
}
