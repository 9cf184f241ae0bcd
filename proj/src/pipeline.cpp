#include "gaborset/pipeline.hpp"

#include <algorithm>

#include "gaborset/error.hpp"
#include "gaborset/image_io.hpp"
#include "gaborset/log.hpp"
#include "gaborset/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gaborset {

BatchResult classify_dir(const fs::path& dir, const MlpModel& model, const FeatureExtractor& extractor,
                         const PreprocessParams& params, double threshold, ScanMode scan, int workers) {
  const auto files = list_images(dir);
  std::vector<std::optional<ClassificationDecision>> slots(files.size());
  std::vector<std::string> reasons(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    try {
      slots[i] = classify_image(files[i], model, extractor, params, threshold, scan);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SkippedImage) throw;
      reasons[i] = e.what();
    }
  });

  BatchResult out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string rel = fs::relative(files[i], dir).generic_string();
    if (slots[i]) {
      out.rows.push_back({rel, std::move(*slots[i])});
    } else {
      log::warn("skipping " + files[i].string() + ": " + reasons[i]);
      out.skipped.push_back({rel, reasons[i]});
    }
  }
  return out;
}

void copy_partition(const fs::path& source_dir, const std::vector<csv::DecisionRow>& rows, const fs::path& matched_dir,
                    const fs::path& unmatched_dir) {
  fs::create_directories(matched_dir);
  fs::create_directories(unmatched_dir);
  for (const auto& row : rows) {
    const fs::path& target = row.decision.verdict == Verdict::Matched ? matched_dir : unmatched_dir;
    const fs::path dest = target / row.path;
    if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
    fs::copy_file(source_dir / row.path, dest, fs::copy_options::overwrite_existing);
  }
}

json metrics_json(const ConfusionCounts& c) {
  json j;
  j["counts"] = {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}, {"tn", c.tn}, {"total", c.total()}};
  if (c.total() == 0) {
    j["metrics"] = nullptr;
    j["degenerate"] = {{"zero_images", true}};
    return j;
  }
  const MetricsReport m = compute(c);
  j["metrics"] = {{"precision", m.precision}, {"recall", m.recall}, {"accuracy", m.accuracy}, {"f1", m.f1}};
  j["degenerate"] = {{"zero_images", false},
                     {"precision", m.precision_degenerate},
                     {"recall", m.recall_degenerate},
                     {"f1", m.f1_degenerate}};
  return j;
}

ConfusionCounts confusion_from_labels(const std::vector<csv::DecisionRow>& rows, const std::map<std::string, int>& labels) {
  std::vector<LabeledDecision> decisions;
  decisions.reserve(rows.size());
  for (const auto& r : rows) decisions.push_back({r.path, r.decision.verdict});
  std::map<std::string, bool> landmark;
  for (const auto& [path, label] : labels) landmark[path] = label >= 0;
  return confusion_from_run(decisions, landmark);
}

json published_consistency_json(double tol) {
  const PublishedConsistency pc = check_published(tol);
  json checks = json::array();
  json inconsistent = json::array();
  for (const auto& c : pc.checks) {
    json item = {{"table", c.table},       {"row", c.name},     {"metric", c.metric},         {"printed", c.printed},
                 {"computed", c.computed}, {"delta", c.delta}, {"consistent", c.consistent}};
    if (!c.consistent) inconsistent.push_back(item);
    checks.push_back(std::move(item));
  }
  json rows = json::array();
  auto add_rows = [&](const std::vector<PublishedRow>& published) {
    for (const auto& r : published) {
      rows.push_back({{"table", r.table}, {"row", r.name}, {"printed_total", r.total_images}, {"counts", metrics_json(r.counts)}});
    }
  };
  add_rows(published_landmark_rows());
  add_rows(published_aggregate_rows());

  ConfusionCounts one_feature_sum;
  for (const auto& r : published_landmark_rows()) {
    if (r.table == "1/6") one_feature_sum += r.counts;
  }
  const ConfusionCounts& one_feature_row = published_aggregate_rows().front().counts;

  return json{{"tolerance", tol},
              {"rows", rows},
              {"checks", checks},
              {"inconsistent", inconsistent},
              {"total_mismatches", pc.total_mismatches},
              {"one_feature_aggregate_matches", one_feature_sum == one_feature_row}};
}

namespace {

// Records what the pipeline created so a failure can roll it back.
class OutputGuard {
 public:
  void track(const fs::path& p) {
    std::error_code ec;
    if (!fs::exists(p, ec)) created_.push_back(p);
  }
  void commit() { created_.clear(); }
  ~OutputGuard() {
    for (auto it = created_.rbegin(); it != created_.rend(); ++it) {
      std::error_code ec;
      fs::remove_all(*it, ec);
    }
  }

 private:
  std::vector<fs::path> created_;
};

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("[") + name + "] " + e.detail());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::IoError, std::string("[") + name + "] " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const LandmarkConfig& cfg, const DatasetManifest& manifest, const fs::path& out_dir) {
  stage("config", [&] {
    cfg.validate();
    manifest.validate();
    return 0;
  });

  PipelineResult result;
  PipelineOutputs& out = result.outputs;
  out.model = out_dir / "model.json";
  out.decisions = out_dir / "decisions.csv";
  out.report = out_dir / "report.json";
  out.matched_dir = out_dir / "matched";
  out.unmatched_dir = out_dir / "unmatched";

  for (const auto& dir : {out.matched_dir, out.unmatched_dir}) {
    std::error_code ec;
    if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
      throw Error(ErrorCode::ConfigError, "[config] output folder already populated: " + dir.string());
    }
  }

  OutputGuard guard;
  for (const auto& p : {out.model, out.decisions, out.report, out.matched_dir, out.unmatched_dir}) guard.track(p);
  guard.track(out_dir);
  fs::create_directories(out_dir);

  const FeatureExtractor extractor(make_bank(cfg.bank), cfg.preprocess.size);

  IngestResult ingested = stage("ingest", [&] { return ingest(manifest, cfg, extractor); });
  log::info("training set: " + std::to_string(ingested.set.size()) + " patterns");

  TrainResult trained = stage("train", [&] { return scg_train(ingested.set, cfg.train); });
  result.model = trained.model;
  result.train_report = trained.report;
  log::info(std::string("training stopped: ") + to_string(trained.report.stop_reason) + " after " +
            std::to_string(trained.report.epochs_run) + " epochs, perf " + csv::format_double(trained.report.final_perf));
  stage("train", [&] {
    save_model(out.model, result.model, &result.train_report);
    return 0;
  });

  BatchResult batch = stage("classify", [&] {
    return classify_dir(manifest.test_dir, result.model, extractor, cfg.preprocess, cfg.threshold, cfg.scan, cfg.workers);
  });
  result.decisions = batch.rows;
  stage("classify", [&] {
    csv::write_decisions(out.decisions, batch.rows);
    copy_partition(manifest.test_dir, batch.rows, out.matched_dir, out.unmatched_dir);
    return 0;
  });

  json report;
  report["landmark"] = cfg.name;
  report["images"] = batch.rows.size();
  report["zero_images"] = batch.rows.empty();
  report["matched"] = std::count_if(batch.rows.begin(), batch.rows.end(),
                                    [](const auto& r) { return r.decision.verdict == Verdict::Matched; });
  report["unmatched"] = batch.rows.size() - report["matched"].get<std::size_t>();
  json skipped = json::array();
  for (const auto& s : ingested.skipped) skipped.push_back({{"stage", "ingest"}, {"path", s.path}, {"reason", s.reason}});
  for (const auto& s : batch.skipped) skipped.push_back({{"stage", "classify"}, {"path", s.path}, {"reason", s.reason}});
  report["skipped"] = skipped;
  report["training"] = {{"patterns", ingested.set.size()},
                        {"epochs_run", result.train_report.epochs_run},
                        {"final_perf", result.train_report.final_perf},
                        {"final_grad_norm", result.train_report.final_grad_norm},
                        {"stop_reason", to_string(result.train_report.stop_reason)},
                        {"seed", cfg.train.seed}};

  if (manifest.test_labels) {
    const ConfusionCounts counts = stage("evaluate", [&] {
      return confusion_from_labels(batch.rows, csv::read_labels(*manifest.test_labels));
    });
    result.counts = counts;
    report["evaluation"] = metrics_json(counts);
  } else {
    report["evaluation"] = nullptr;
  }
  result.report = report;
  stage("report", [&] {
    write_text(out.report, report.dump(2) + "\n");
    return 0;
  });

  guard.commit();
  return result;
}

}  // namespace gaborset
