#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gaborset/features.hpp"
#include "gaborset/network.hpp"
#include "gaborset/preprocess.hpp"

namespace gaborset {

enum class Verdict { Matched, Unmatched };

const char* to_string(Verdict v);

/// Algorithm-1 outcome for one image. detection_factors[i] is 1 iff
/// outputs[i] >= threshold; overall_matching is their product.
struct ClassificationDecision {
  std::vector<double> outputs;
  std::vector<int> detection_factors;
  int overall_matching = 0;
  Verdict verdict = Verdict::Unmatched;
  double threshold = 0.8;
  /// Diagnostic only: every output <= -0.5.
  bool confident_absence = false;

  friend bool operator==(const ClassificationDecision&, const ClassificationDecision&) = default;
};

inline constexpr double kDefaultThreshold = 0.8;
inline constexpr double kConfidentAbsenceLevel = -0.5;

/// Throws NoCandidateFeatures when `outputs` is empty.
ClassificationDecision decide(std::span<const double> outputs, double threshold = kDefaultThreshold);

enum class ScanMode {
  Off,    // whole image only
  Grid3,  // whole image, four quadrants and a centre crop; per-neuron max
};

const char* to_string(ScanMode m);
ScanMode scan_mode_from_string(const std::string& s);

/// Network outputs for an already decoded image.
std::vector<double> score_image(const RawImage& img, const MlpModel& model, const FeatureExtractor& extractor,
                                const PreprocessParams& params, ScanMode scan = ScanMode::Off);

/// Read, preprocess, featurize, score and decide. Unreadable or corrupt files
/// raise SkippedImage; batch callers log and continue.
ClassificationDecision classify_image(const std::filesystem::path& path, const MlpModel& model,
                                      const FeatureExtractor& extractor, const PreprocessParams& params,
                                      double threshold = kDefaultThreshold, ScanMode scan = ScanMode::Off);

}  // namespace gaborset
