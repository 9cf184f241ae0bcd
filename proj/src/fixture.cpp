#include "gaborset/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "gaborset/csv.hpp"
#include "gaborset/error.hpp"
#include "gaborset/image_io.hpp"

namespace fs = std::filesystem;

namespace gaborset::fixture {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method.
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::vector<RoiSpec> feature_regions(const FixtureSpec& spec) {
  static constexpr RoiSpec quadrants[] = {
      {0.0, 0.0, 0.5, 0.5, 0}, {0.5, 0.5, 0.5, 0.5, 1}, {0.5, 0.0, 0.5, 0.5, 2}, {0.0, 0.5, 0.5, 0.5, 3}};
  std::vector<RoiSpec> out;
  for (std::size_t k = 0; k < spec.gratings.size(); ++k) {
    if (spec.layout == Layout::Overlay) {
      out.push_back({0.0, 0.0, 1.0, 1.0, static_cast<int>(k)});
    } else {
      if (k >= std::size(quadrants)) throw Error(ErrorCode::ConfigError, "quadrant layout supports at most 4 features");
      out.push_back(quadrants[k]);
    }
  }
  return out;
}

namespace {

struct Lighting {
  double gain;
  double offset;
};

Lighting random_lighting(Rng& rng) { return {rng.uniform(0.7, 1.1), rng.uniform(-20.0, 20.0)}; }

std::vector<double> noise_field(const FixtureSpec& spec, Rng& rng) {
  std::vector<double> field(static_cast<std::size_t>(spec.image_size) * spec.image_size);
  for (double& v : field) v = spec.noise_sigma * rng.normal();
  return field;
}

RawImage render(const FixtureSpec& spec, const std::vector<double>& field, Lighting light) {
  RawImage img(spec.image_size, spec.image_size, 1);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = 128.0 + light.offset + light.gain * field[i];
    img.data[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return img;
}

}  // namespace

RawImage landmark_image(const FixtureSpec& spec, Rng& rng, int only) {
  const Lighting light = random_lighting(rng);
  std::vector<double> field = noise_field(spec, rng);
  const auto regions = feature_regions(spec);
  const int n = spec.image_size;
  for (std::size_t k = 0; k < spec.gratings.size(); ++k) {
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    if (only >= 0 && static_cast<int>(k) != only) continue;
    const Grating& g = spec.gratings[k];
    const RoiSpec& roi = regions[k];
    const int x0 = static_cast<int>(std::lround(roi.x * n));
    const int x1 = static_cast<int>(std::lround((roi.x + roi.w) * n));
    const int y0 = static_cast<int>(std::lround(roi.y * n));
    const int y1 = static_cast<int>(std::lround((roi.y + roi.h) * n));
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        field[static_cast<std::size_t>(y) * n + x] +=
            spec.grating_amplitude * std::cos(2.0 * std::numbers::pi * g.frequency * (x * c + y * s) + phase);
      }
    }
  }
  return render(spec, field, light);
}

RawImage noise_image(const FixtureSpec& spec, Rng& rng) {
  const Lighting light = random_lighting(rng);
  return render(spec, noise_field(spec, rng), light);
}

LandmarkConfig fixture_config(const FixtureSpec& spec) {
  LandmarkConfig cfg;
  cfg.name = "synthetic-gratings";
  cfg.candidate_features = feature_regions(spec);
  cfg.scan = ScanMode::Grid3;
  return cfg;
}

FixturePaths write_dataset(const fs::path& root, const FixtureSpec& spec) {
  if (spec.gratings.empty()) throw Error(ErrorCode::ConfigError, "fixture needs at least one grating");
  Rng rng(spec.seed);
  fs::create_directories(root);

  auto name = [](const char* prefix, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%04d.png", prefix, i);
    return std::string(buf);
  };

  DatasetManifest manifest;
  for (std::size_t k = 0; k < spec.gratings.size(); ++k) {
    const fs::path dir = root / ("feature_" + std::to_string(k));
    fs::create_directories(dir);
    for (int i = 0; i < spec.positives_per_feature; ++i) {
      write_png(dir / name("pos", i), landmark_image(spec, rng, static_cast<int>(k)));
    }
    manifest.feature_dirs.push_back(dir.filename());
  }

  const fs::path neg_dir = root / "nonfeature";
  fs::create_directories(neg_dir);
  for (int i = 0; i < spec.negatives; ++i) write_png(neg_dir / name("neg", i), noise_image(spec, rng));
  manifest.nonfeature_dir = neg_dir.filename();

  const fs::path test_dir = root / "test";
  fs::create_directories(test_dir);
  std::map<std::string, int> labels;
  for (int i = 0; i < spec.test_images; ++i) {
    // Interleave so the sorted listing mixes both classes.
    const bool landmark = i % 2 == 0;
    const std::string file = name("img", i);
    write_png(test_dir / file, landmark ? landmark_image(spec, rng) : noise_image(spec, rng));
    labels[file] = landmark ? 0 : -1;
  }
  manifest.test_dir = test_dir.filename();

  FixturePaths paths;
  paths.root = root;
  paths.test_labels = root / "test_labels.csv";
  csv::write_labels(paths.test_labels, labels);
  manifest.test_labels = paths.test_labels.filename();

  paths.manifest = root / "manifest.json";
  write_text(paths.manifest, serialize_manifest(manifest));
  paths.config = root / "config.json";
  write_text(paths.config, serialize_config(fixture_config(spec)));
  return paths;
}

TrainingSet toy_blob_set(int count, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> center(static_cast<std::size_t>(dim));
  for (double& c : center) c = rng.uniform(-0.5, 0.5);

  TrainingSet set;
  for (int i = 0; i < count; ++i) {
    const int cls = i % 2;
    const double sign = cls == 0 ? 1.0 : -1.0;
    FeatureVector fv;
    fv.values.resize(static_cast<std::size_t>(dim));
    for (std::size_t d = 0; d < fv.values.size(); ++d) fv.values[d] = sign * center[d] + 0.1 * rng.normal();
    set.patterns.push_back(std::move(fv));
    set.targets.push_back(target_for(cls, 2));
  }
  return set;
}

}  // namespace gaborset::fixture
