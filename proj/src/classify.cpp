#include "gaborset/classify.hpp"

#include <algorithm>
#include <cmath>

#include "gaborset/error.hpp"
#include "gaborset/image_io.hpp"

namespace gaborset {

const char* to_string(Verdict v) { return v == Verdict::Matched ? "matched" : "unmatched"; }

ClassificationDecision decide(std::span<const double> outputs, double threshold) {
  if (outputs.empty()) throw Error(ErrorCode::NoCandidateFeatures, "no network outputs to threshold");

  ClassificationDecision d;
  d.threshold = threshold;
  d.outputs.assign(outputs.begin(), outputs.end());
  d.detection_factors.assign(outputs.size(), 0);
  d.overall_matching = 1;
  d.confident_absence = true;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (!std::isfinite(outputs[i])) throw Error(ErrorCode::ShapeError, "non-finite network output");
    if (outputs[i] >= threshold) d.detection_factors[i] = 1;
    d.overall_matching *= d.detection_factors[i];
    d.confident_absence = d.confident_absence && outputs[i] <= kConfidentAbsenceLevel;
  }
  d.verdict = d.overall_matching == 1 ? Verdict::Matched : Verdict::Unmatched;
  return d;
}

const char* to_string(ScanMode m) { return m == ScanMode::Grid3 ? "grid3" : "off"; }

ScanMode scan_mode_from_string(const std::string& s) {
  if (s == "off") return ScanMode::Off;
  if (s == "grid3") return ScanMode::Grid3;
  throw Error(ErrorCode::ConfigError, "unknown scan mode '" + s + "' (expected off or grid3)");
}

std::vector<double> score_image(const RawImage& img, const MlpModel& model, const FeatureExtractor& extractor,
                                const PreprocessParams& params, ScanMode scan) {
  if (static_cast<std::size_t>(model.inputs) != extractor.dimension()) {
    throw Error(ErrorCode::ShapeError, "model input size " + std::to_string(model.inputs) +
                                           " does not match bank feature dimension " +
                                           std::to_string(extractor.dimension()));
  }
  auto score = [&](const RawImage& view) { return forward(model, extractor.extract(preprocess(view, params))); };

  std::vector<double> best = score(img);
  if (scan == ScanMode::Grid3) {
    struct Window {
      double x, y, w, h;
    };
    static constexpr Window windows[] = {
        {0.0, 0.0, 0.5, 0.5}, {0.5, 0.0, 0.5, 0.5}, {0.0, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}, {0.25, 0.25, 0.5, 0.5},
    };
    for (const auto& win : windows) {
      const auto out = score(crop_fraction(img, win.x, win.y, win.w, win.h));
      for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], out[i]);
    }
  }
  return best;
}

ClassificationDecision classify_image(const std::filesystem::path& path, const MlpModel& model,
                                      const FeatureExtractor& extractor, const PreprocessParams& params,
                                      double threshold, ScanMode scan) {
  RawImage img;
  try {
    img = read_image(path);
    img.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SkippedImage, e.what());
  }
  return decide(score_image(img, model, extractor, params, scan), threshold);
}

}  // namespace gaborset
