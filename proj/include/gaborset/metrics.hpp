#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gaborset/classify.hpp"

namespace gaborset {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fn + fp + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Precision, recall, accuracy and F1 = 2tp / (2tp + fp + fn). A 0/0 metric
/// is reported as 0 with its degenerate flag set.
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

/// Throws DegenerateCounts when every count is zero, ConfigError on negatives.
MetricsReport compute(const ConfusionCounts& c);

struct LabeledDecision {
  std::string path;
  Verdict verdict = Verdict::Unmatched;
};

/// Labels map path -> true for landmark images. Throws MissingLabel.
ConfusionCounts confusion_from_run(const std::vector<LabeledDecision>& decisions,
                                   const std::map<std::string, bool>& landmark_labels);

/// One row of the published results: counts plus printed metrics.
struct PublishedRow {
  std::string table;
  std::string name;
  std::int64_t total_images = 0;
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
};

/// Confusion rows for the individual landmarks with their printed metrics.
const std::vector<PublishedRow>& published_landmark_rows();

/// Rows aggregated by number of candidate features, with printed metrics.
const std::vector<PublishedRow>& published_aggregate_rows();

struct ConsistencyCheck {
  std::string table;
  std::string name;
  std::string metric;
  double printed = 0.0;
  double computed = 0.0;
  double delta = 0.0;
  bool consistent = false;
};

/// Recompute every published metric from its counts and compare at `tol`.
/// Also flags rows whose printed total differs from tp + fn + fp + tn.
struct PublishedConsistency {
  std::vector<ConsistencyCheck> checks;
  std::vector<std::string> total_mismatches;
};

PublishedConsistency check_published(double tol = 1e-6);

}  // namespace gaborset
