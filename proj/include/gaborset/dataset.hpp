#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaborset/config.hpp"
#include "gaborset/features.hpp"
#include "gaborset/network.hpp"

namespace gaborset {

struct SkippedFile {
  std::string path;
  std::string reason;
};

/// Read, optionally crop to a fractional ROI, preprocess and featurize one
/// file. Returns nullopt (and records the reason) when the file cannot be decoded.
std::optional<FeatureVector> featurize_file(const std::filesystem::path& path, const std::optional<RoiSpec>& roi,
                                            const PreprocessParams& params, const FeatureExtractor& extractor,
                                            std::vector<SkippedFile>* skipped = nullptr);

/// Featurize every image of `dir` in sorted order on the worker pool.
/// Unreadable files are skipped; order of the result follows the sorted listing.
struct FeaturizedDir {
  std::vector<std::filesystem::path> paths;
  std::vector<FeatureVector> features;
  std::vector<SkippedFile> skipped;
};

FeaturizedDir featurize_dir(const std::filesystem::path& dir, const std::optional<RoiSpec>& roi,
                            const PreprocessParams& params, const FeatureExtractor& extractor, int workers);

struct IngestResult {
  TrainingSet set;
  std::vector<SkippedFile> skipped;
};

/// Feature directory i is cropped with the ROI whose feature_index is i and
/// labelled +1 at output i; non-feature images are used whole with all -1
/// targets. Throws InvalidTrainingSet if a feature directory yields no images.
IngestResult ingest(const DatasetManifest& manifest, const LandmarkConfig& cfg, const FeatureExtractor& extractor);

}  // namespace gaborset
