#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaborset/classify.hpp"
#include "gaborset/gabor.hpp"
#include "gaborset/network.hpp"
#include "gaborset/preprocess.hpp"

namespace gaborset {

/// Candidate-feature region as fractions of the image width/height.
struct RoiSpec {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
  int feature_index = 0;

  void validate() const;
  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

struct LandmarkConfig {
  std::string name = "landmark";
  std::vector<RoiSpec> candidate_features{RoiSpec{}};
  BankConfig bank;
  PreprocessParams preprocess;
  TrainConfig train;
  double threshold = kDefaultThreshold;
  ScanMode scan = ScanMode::Off;
  /// 0 = one worker per hardware thread.
  int workers = 0;

  int outputs() const { return static_cast<int>(candidate_features.size()); }

  /// Throws ConfigError.
  void validate() const;
  friend bool operator==(const LandmarkConfig&, const LandmarkConfig&) = default;
};

void to_json(nlohmann::json& j, const RoiSpec& r);
void from_json(const nlohmann::json& j, RoiSpec& r);
void to_json(nlohmann::json& j, const LandmarkConfig& c);
void from_json(const nlohmann::json& j, LandmarkConfig& c);

/// Parse and validate; missing keys keep their defaults. Throws ConfigError.
LandmarkConfig parse_config(const std::string& text);
LandmarkConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const LandmarkConfig& cfg);

/// Replace train.seed with $GABORSET_SEED when it is set. Throws ConfigError
/// on a malformed value.
void apply_env_overrides(LandmarkConfig& cfg);

/// Where the preliminary (training) and actual (test) images live.
struct DatasetManifest {
  std::vector<std::filesystem::path> feature_dirs;  // one per candidate feature, in feature-index order
  std::filesystem::path nonfeature_dir;
  std::filesystem::path test_dir;
  std::optional<std::filesystem::path> test_labels;  // labels.csv for the test set, optional

  /// Throws ConfigError for missing directories or an empty feature list.
  void validate() const;
};

/// Relative paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(const DatasetManifest& m);

/// Model file: {input, hidden, outputs, activation, seed, w1, b1, w2, b2, train_report}.
nlohmann::json model_to_json(const MlpModel& m, const TrainReport* report = nullptr);
MlpModel model_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const TrainReport& r);
TrainReport report_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const MlpModel& m, const TrainReport* report = nullptr);
MlpModel load_model(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gaborset
