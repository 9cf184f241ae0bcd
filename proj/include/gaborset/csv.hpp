#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gaborset/classify.hpp"
#include "gaborset/features.hpp"

namespace gaborset::csv {

/// Shortest-round-trip text for a double.
std::string format_double(double v);

std::string escape(const std::string& field);
std::vector<std::string> split_line(const std::string& line);

/// features.csv: `path,v0,...,v{D-1}` per row, no header.
struct FeatureRow {
  std::string path;
  FeatureVector features;
};

void write_features(const std::filesystem::path& file, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features(const std::filesystem::path& file);

/// labels.csv: header `path,label`. label is the candidate-feature index for a
/// landmark image (0..N-1) or -1 for a non-landmark image. Evaluation treats
/// any label >= 0 as "landmark".
void write_labels(const std::filesystem::path& file, const std::map<std::string, int>& labels);
std::map<std::string, int> read_labels(const std::filesystem::path& file);

/// decisions.csv: header `path,output_0..,factor_0..,verdict`.
struct DecisionRow {
  std::string path;
  ClassificationDecision decision;
};

void write_decisions(const std::filesystem::path& file, const std::vector<DecisionRow>& rows);
std::vector<DecisionRow> read_decisions(const std::filesystem::path& file);

}  // namespace gaborset::csv
