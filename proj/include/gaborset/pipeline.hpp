#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaborset/config.hpp"
#include "gaborset/csv.hpp"
#include "gaborset/dataset.hpp"
#include "gaborset/metrics.hpp"
#include "gaborset/network.hpp"

namespace gaborset {

/// Classify every image of `dir` (sorted order) and return one row per
/// readable file; row paths are relative to `dir`.
struct BatchResult {
  std::vector<csv::DecisionRow> rows;
  std::vector<SkippedFile> skipped;
};

BatchResult classify_dir(const std::filesystem::path& dir, const MlpModel& model, const FeatureExtractor& extractor,
                         const PreprocessParams& params, double threshold, ScanMode scan, int workers);

/// Copy each classified file from `source_dir` into `matched_dir` or
/// `unmatched_dir`. Originals are left untouched.
void copy_partition(const std::filesystem::path& source_dir, const std::vector<csv::DecisionRow>& rows,
                    const std::filesystem::path& matched_dir, const std::filesystem::path& unmatched_dir);

/// Evaluation report: counts, metrics, degenerate flags.
nlohmann::json metrics_json(const ConfusionCounts& counts);

/// Decisions joined with labels (label >= 0 means landmark).
ConfusionCounts confusion_from_labels(const std::vector<csv::DecisionRow>& rows, const std::map<std::string, int>& labels);

/// Section reproducing the published metric tables from their counts.
nlohmann::json published_consistency_json(double tol = 1e-6);

struct PipelineOutputs {
  std::filesystem::path model;
  std::filesystem::path decisions;
  std::filesystem::path report;
  std::filesystem::path matched_dir;
  std::filesystem::path unmatched_dir;
};

struct PipelineResult {
  MlpModel model;
  TrainReport train_report;
  std::vector<csv::DecisionRow> decisions;
  std::optional<ConfusionCounts> counts;
  nlohmann::json report;
  PipelineOutputs outputs;
};

/// ingest -> scg_train -> classify test set -> write model.json,
/// decisions.csv, report.json and matched/ + unmatched/ under `out_dir`.
/// A failing stage removes the outputs created so far and rethrows with the
/// stage name prefixed.
PipelineResult run_pipeline(const LandmarkConfig& cfg, const DatasetManifest& manifest,
                            const std::filesystem::path& out_dir);

}  // namespace gaborset
