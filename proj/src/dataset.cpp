#include "gaborset/dataset.hpp"

#include "gaborset/error.hpp"
#include "gaborset/image_io.hpp"
#include "gaborset/log.hpp"
#include "gaborset/parallel.hpp"

namespace fs = std::filesystem;

namespace gaborset {

std::optional<FeatureVector> featurize_file(const fs::path& path, const std::optional<RoiSpec>& roi,
                                            const PreprocessParams& params, const FeatureExtractor& extractor,
                                            std::vector<SkippedFile>* skipped) {
  RawImage img;
  try {
    img = read_image(path);
    img.validate();
  } catch (const Error& e) {
    log::warn("skipping " + path.string() + ": " + e.what());
    if (skipped) skipped->push_back({path.string(), e.what()});
    return std::nullopt;
  }
  if (roi) img = crop_fraction(img, roi->x, roi->y, roi->w, roi->h);
  return extractor.extract(preprocess(img, params));
}

FeaturizedDir featurize_dir(const fs::path& dir, const std::optional<RoiSpec>& roi, const PreprocessParams& params,
                            const FeatureExtractor& extractor, int workers) {
  const auto files = list_images(dir);
  std::vector<std::optional<FeatureVector>> slots(files.size());
  std::vector<std::vector<SkippedFile>> skip_slots(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    slots[i] = featurize_file(files[i], roi, params, extractor, &skip_slots[i]);
  });

  FeaturizedDir out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (slots[i]) {
      out.paths.push_back(files[i]);
      out.features.push_back(std::move(*slots[i]));
    }
    for (auto& s : skip_slots[i]) out.skipped.push_back(std::move(s));
  }
  return out;
}

IngestResult ingest(const DatasetManifest& manifest, const LandmarkConfig& cfg, const FeatureExtractor& extractor) {
  manifest.validate();
  cfg.validate();
  const int outputs = cfg.outputs();
  if (static_cast<int>(manifest.feature_dirs.size()) != outputs) {
    throw Error(ErrorCode::ConfigError, "manifest has " + std::to_string(manifest.feature_dirs.size()) +
                                            " feature directories but config declares " + std::to_string(outputs) +
                                            " candidate features");
  }

  IngestResult result;
  auto append = [&](FeaturizedDir dir, int feature_index) {
    for (std::size_t i = 0; i < dir.features.size(); ++i) {
      result.set.patterns.push_back(std::move(dir.features[i]));
      result.set.targets.push_back(target_for(feature_index, outputs));
      result.set.sources.push_back(dir.paths[i].string());
    }
    for (auto& s : dir.skipped) result.skipped.push_back(std::move(s));
  };

  for (int k = 0; k < outputs; ++k) {
    const auto& dir = manifest.feature_dirs[static_cast<std::size_t>(k)];
    std::optional<RoiSpec> roi;
    for (const auto& r : cfg.candidate_features) {
      if (r.feature_index == k) roi = r;
    }
    FeaturizedDir fd = featurize_dir(dir, roi, cfg.preprocess, extractor, cfg.workers);
    if (fd.features.empty()) {
      throw Error(ErrorCode::InvalidTrainingSet, "feature directory has no usable images: " + dir.string());
    }
    log::info("feature " + std::to_string(k) + ": " + std::to_string(fd.features.size()) + " images from " + dir.string());
    append(std::move(fd), k);
  }

  FeaturizedDir neg = featurize_dir(manifest.nonfeature_dir, std::nullopt, cfg.preprocess, extractor, cfg.workers);
  log::info("non-feature: " + std::to_string(neg.features.size()) + " images from " + manifest.nonfeature_dir.string());
  append(std::move(neg), -1);

  result.set.validate();
  return result;
}

}  // namespace gaborset
