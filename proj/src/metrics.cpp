#include "gaborset/metrics.hpp"

#include <cmath>

#include "gaborset/error.hpp"

namespace gaborset {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fn += o.fn;
  fp += o.fp;
  tn += o.tn;
  return *this;
}

namespace {

double ratio(std::int64_t num, std::int64_t den, bool& degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport compute(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fn < 0 || c.fp < 0 || c.tn < 0) throw Error(ErrorCode::ConfigError, "negative confusion count");
  if (c.total() == 0) throw Error(ErrorCode::DegenerateCounts, "all confusion counts are zero");

  MetricsReport m;
  bool unused = false;
  m.precision = ratio(c.tp, c.tp + c.fp, m.precision_degenerate);
  m.recall = ratio(c.tp, c.tp + c.fn, m.recall_degenerate);
  m.accuracy = ratio(c.tp + c.tn, c.total(), unused);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, m.f1_degenerate);
  return m;
}

ConfusionCounts confusion_from_run(const std::vector<LabeledDecision>& decisions,
                                   const std::map<std::string, bool>& landmark_labels) {
  ConfusionCounts c;
  for (const auto& d : decisions) {
    const auto it = landmark_labels.find(d.path);
    if (it == landmark_labels.end()) throw Error(ErrorCode::MissingLabel, "no label for " + d.path);
    const bool matched = d.verdict == Verdict::Matched;
    const bool landmark = it->second;
    if (matched && landmark) ++c.tp;
    else if (matched) ++c.fp;
    else if (landmark) ++c.fn;
    else ++c.tn;
  }
  return c;
}

const std::vector<PublishedRow>& published_landmark_rows() {
  static const std::vector<PublishedRow> rows = {
      {"1/6", "Coliseum", 1520, {532, 301, 412, 188}, 0.563559322, 0.638655462, 0.502442428, 0.598761958},
      {"1/6", "Dome", 1313, {491, 333, 407, 169}, 0.546770601, 0.595873786, 0.471428571, 0.570267131},
      {"2/7", "Eiffel", 1630, {805, 325, 236, 129}, 0.773294909, 0.712389381, 0.624749164, 0.741593736},
      {"2/7", "Pyramid", 1330, {612, 455, 285, 113}, 0.682274247, 0.573570759, 0.494880546, 0.623217923},
      {"3/8", "Statue", 2219, {1569, 331, 216, 103}, 0.878991597, 0.825789474, 0.753492564, 1.482986767},
  };
  return rows;
}

const std::vector<PublishedRow>& published_aggregate_rows() {
  static const std::vector<PublishedRow> rows = {
      {"4/9", "One Feature", 2833, {1023, 634, 819, 357}, 0.555374593, 0.617380809, 0.487116131, 0.584738497},
      {"4/9", "Two Features", 2960, {1417, 780, 521, 242}, 0.731166151, 0.644970414, 0.560472973, 1.04267844},
      {"4/9", "Three Features", 2219, {1569, 331, 216, 103}, 0.878991597, 0.825789474, 0.753492564, 1.482986767},
  };
  return rows;
}

PublishedConsistency check_published(double tol) {
  PublishedConsistency out;
  auto check_rows = [&](const std::vector<PublishedRow>& rows) {
    for (const auto& row : rows) {
      const MetricsReport m = compute(row.counts);
      const std::pair<const char*, std::pair<double, double>> items[] = {
          {"precision", {row.precision, m.precision}},
          {"recall", {row.recall, m.recall}},
          {"accuracy", {row.accuracy, m.accuracy}},
          {"f1", {row.f1, m.f1}},
      };
      for (const auto& [metric, values] : items) {
        const double delta = values.second - values.first;
        out.checks.push_back({row.table, row.name, metric, values.first, values.second, delta, std::abs(delta) <= tol});
      }
      if (row.total_images != row.counts.total()) {
        out.total_mismatches.push_back(row.name + ": printed total " + std::to_string(row.total_images) +
                                       ", counts sum to " + std::to_string(row.counts.total()));
      }
    }
  };
  check_rows(published_landmark_rows());
  check_rows(published_aggregate_rows());
  return out;
}

}  // namespace gaborset
