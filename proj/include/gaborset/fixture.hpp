#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "gaborset/config.hpp"
#include "gaborset/image.hpp"
#include "gaborset/network.hpp"

namespace gaborset::fixture {

/// Oriented sinusoid used as a synthetic "landmark feature".
struct Grating {
  double frequency;  // cycles per pixel
  double theta;      // radians
};

/// Where the gratings sit. Quadrants: feature 0 top-left, feature 1
/// bottom-right (further features fill the remaining quadrants). Overlay:
/// every feature spans the whole image.
enum class Layout { Quadrants, Overlay };

struct FixtureSpec {
  int image_size = 128;
  Layout layout = Layout::Quadrants;
  std::vector<Grating> gratings{{0.125, 2.0 * 3.14159265358979323846 / 10.0}, {0.2, 7.0 * 3.14159265358979323846 / 10.0}};
  int positives_per_feature = 120;
  int negatives = 50;
  int test_images = 100;  // half landmark-like, half noise
  double grating_amplitude = 60.0;
  double noise_sigma = 25.0;
  std::uint64_t seed = 7;
};

/// mt19937_64 output is fixed by the standard but std:: distributions are
/// not, so the uniform/normal transforms are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Landmark-like image: grating k inside the region of candidate feature k,
/// background noise elsewhere. With `only` set, just that feature is drawn.
RawImage landmark_image(const FixtureSpec& spec, Rng& rng, int only = -1);

/// Background-only image (the non-landmark class).
RawImage noise_image(const FixtureSpec& spec, Rng& rng);

/// Candidate-feature regions used by the generated config (one per grating).
std::vector<RoiSpec> feature_regions(const FixtureSpec& spec);

/// Paths written by write_dataset.
struct FixturePaths {
  std::filesystem::path root;
  std::filesystem::path config;
  std::filesystem::path manifest;
  std::filesystem::path test_labels;
};

/// Write feature_<k>/, nonfeature/, test/, test_labels.csv, config.json and
/// manifest.json under `root`.
FixturePaths write_dataset(const std::filesystem::path& root, const FixtureSpec& spec = {});

/// Configuration used with the generated dataset.
LandmarkConfig fixture_config(const FixtureSpec& spec);

/// Two separable Gaussian blobs in a `dim`-dimensional feature space,
/// `count` patterns split evenly, targets (+1,-1) / (-1,+1).
TrainingSet toy_blob_set(int count = 40, int dim = 100, std::uint64_t seed = 1);

}  // namespace gaborset::fixture
