// gaborset: select the landmark images out of a mixed image collection.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gaborset/config.hpp"
#include "gaborset/csv.hpp"
#include "gaborset/dataset.hpp"
#include "gaborset/error.hpp"
#include "gaborset/fixture.hpp"
#include "gaborset/image_io.hpp"
#include "gaborset/log.hpp"
#include "gaborset/parallel.hpp"
#include "gaborset/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gaborset;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidBank:
    case ErrorCode::InvalidKernelSize:
      return kExitConfig;
    default:
      return kExitData;
  }
}

LandmarkConfig config_or_default(const std::string& path) {
  LandmarkConfig cfg = path.empty() ? LandmarkConfig{} : load_config(path);
  apply_env_overrides(cfg);
  return cfg;
}

std::string kernel_stem(std::size_t index, const GaborKernel& k) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "kernel_%02zu_f%.3f_t%03d", index, k.params().f0,
                static_cast<int>(std::lround(k.params().theta * 180.0 / 3.14159265358979323846)));
  return buf;
}

int cmd_preprocess(const std::string& in, const std::string& out, const PreprocessParams& params, int workers) {
  params.validate();
  const auto files = list_images(in);
  fs::create_directories(out);
  std::vector<std::string> failures(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    try {
      const GrayImage img = preprocess(read_image(files[i]), params);
      write_png(fs::path(out) / (files[i].stem().string() + ".png"), to_display(img.data, img.side));
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!failures[i].empty()) log::warn("skipping " + files[i].string() + ": " + failures[i]);
  }
  log::info("preprocessed " + std::to_string(files.size()) + " images into " + out);
  return 0;
}

int cmd_gen_kernels(const std::string& out, const std::string& config) {
  const LandmarkConfig cfg = config_or_default(config);
  const GaborBank bank = make_bank(cfg.bank);
  fs::create_directories(out);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const GaborKernel& k = bank.kernels[i];
    std::vector<double> re, im, mag;
    for (const auto& v : k.data()) {
      re.push_back(v.real());
      im.push_back(v.imag());
      mag.push_back(std::abs(v));
    }
    const std::string stem = kernel_stem(i, k);
    write_png(fs::path(out) / (stem + "_re.png"), to_display(re, k.size()));
    write_png(fs::path(out) / (stem + "_im.png"), to_display(im, k.size()));
    write_png(fs::path(out) / (stem + "_mag.png"), to_display(mag, k.size()));
  }
  log::info("wrote " + std::to_string(bank.size()) + " kernels to " + out);
  return 0;
}

int cmd_extract(const std::string& in, const std::string& bank_cfg, const std::string& out, const std::string& dump_maps) {
  const LandmarkConfig cfg = config_or_default(bank_cfg);
  const FeatureExtractor extractor(make_bank(cfg.bank), cfg.preprocess.size);
  const FeaturizedDir fd = featurize_dir(in, std::nullopt, cfg.preprocess, extractor, cfg.workers);

  std::vector<csv::FeatureRow> rows;
  for (std::size_t i = 0; i < fd.paths.size(); ++i) {
    rows.push_back({fs::relative(fd.paths[i], in).generic_string(), fd.features[i]});
  }
  csv::write_features(out, rows);

  if (!dump_maps.empty()) {
    fs::create_directories(dump_maps);
    for (const auto& path : fd.paths) {
      const GrayImage img = preprocess(read_image(path), cfg.preprocess);
      const auto maps = extractor.magnitude_maps(img);
      for (std::size_t k = 0; k < maps.size(); ++k) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_k%02zu.png", k);
        write_png(fs::path(dump_maps) / (path.stem().string() + suffix), to_display(maps[k], img.side));
      }
    }
  }
  log::info("extracted " + std::to_string(rows.size()) + " feature vectors (" +
            std::to_string(extractor.dimension()) + " values each) into " + out);
  return 0;
}

int cmd_train(const std::string& features, const std::string& labels, const std::string& config, const std::string& out) {
  const LandmarkConfig cfg = config_or_default(config);
  const auto rows = csv::read_features(features);
  const auto label_map = csv::read_labels(labels);

  int outputs = config.empty() ? 0 : cfg.outputs();
  if (outputs == 0) {
    for (const auto& [path, label] : label_map) outputs = std::max(outputs, label + 1);
  }
  TrainingSet set;
  for (const auto& row : rows) {
    const auto it = label_map.find(row.path);
    if (it == label_map.end()) throw Error(ErrorCode::MissingLabel, "no label for " + row.path);
    set.patterns.push_back(row.features);
    set.targets.push_back(target_for(it->second, outputs));
    set.sources.push_back(row.path);
  }
  const TrainResult result = scg_train(set, cfg.train);
  save_model(out, result.model, &result.report);
  log::info(std::string("training stopped: ") + to_string(result.report.stop_reason) + " after " +
            std::to_string(result.report.epochs_run) + " epochs, perf " + csv::format_double(result.report.final_perf));
  return 0;
}

int cmd_classify(const std::string& in, const std::string& model_path, const std::string& bank_cfg,
                 const std::string& matched, const std::string& unmatched, std::optional<double> threshold,
                 std::optional<std::string> scan, const std::string& decisions) {
  LandmarkConfig cfg = config_or_default(bank_cfg);
  if (threshold) cfg.threshold = *threshold;
  if (scan) cfg.scan = scan_mode_from_string(*scan);
  const MlpModel model = load_model(model_path);
  const FeatureExtractor extractor(make_bank(cfg.bank), cfg.preprocess.size);
  const BatchResult batch = classify_dir(in, model, extractor, cfg.preprocess, cfg.threshold, cfg.scan, cfg.workers);
  csv::write_decisions(decisions, batch.rows);
  copy_partition(in, batch.rows, matched, unmatched);
  const auto n_matched = std::count_if(batch.rows.begin(), batch.rows.end(),
                                       [](const auto& r) { return r.decision.verdict == Verdict::Matched; });
  log::info("classified " + std::to_string(batch.rows.size()) + " images: " + std::to_string(n_matched) + " matched, " +
            std::to_string(batch.skipped.size()) + " skipped");
  return 0;
}

int cmd_evaluate(const std::string& decisions, const std::string& labels, const std::string& report, bool published) {
  nlohmann::json j;
  if (!decisions.empty()) {
    if (labels.empty()) throw Error(ErrorCode::ConfigError, "--labels is required with --decisions");
    const ConfusionCounts counts = confusion_from_labels(csv::read_decisions(decisions), csv::read_labels(labels));
    j = metrics_json(counts);
  }
  if (published) j["paper_consistency"] = published_consistency_json();
  if (j.is_null()) throw Error(ErrorCode::ConfigError, "nothing to evaluate: pass --decisions/--labels or --published");
  const std::string text = j.dump(2) + "\n";
  if (report.empty()) {
    std::cout << text;
  } else {
    write_text(report, text);
  }
  return 0;
}

int cmd_run(const std::string& config, const std::string& manifest, const std::string& out) {
  LandmarkConfig cfg = load_config(config);
  apply_env_overrides(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const PipelineResult result = run_pipeline(cfg, load_manifest(manifest), out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string summary = "run finished in " + csv::format_double(std::round(secs * 100) / 100) + " s";
  if (result.counts) {
    summary += ", accuracy " + csv::format_double(compute(*result.counts).accuracy);
  }
  log::info(summary);
  return 0;
}

int cmd_fixture(const std::string& out, std::uint64_t seed, int positives, int negatives, int tests, const std::string& layout) {
  fixture::FixtureSpec spec;
  spec.seed = seed;
  spec.positives_per_feature = positives;
  spec.negatives = negatives;
  spec.test_images = tests;
  if (layout == "overlay") {
    spec.layout = fixture::Layout::Overlay;
  } else if (layout != "quadrants") {
    throw Error(ErrorCode::ConfigError, "unknown layout '" + layout + "'");
  }
  const fixture::FixturePaths paths = fixture::write_dataset(out, spec);
  std::cout << "config:   " << paths.config.string() << "\n"
            << "manifest: " << paths.manifest.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor-feature landmark image subset selection"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only print warnings and errors");

  PreprocessParams pre;
  std::string pre_in, pre_out;
  int pre_workers = 0;
  auto* sub_pre = app.add_subcommand("preprocess", "Grayscale, resize, AHE and normalize a folder of images");
  sub_pre->add_option("--in", pre_in, "Input folder")->required();
  sub_pre->add_option("--out", pre_out, "Output folder for PNG dumps")->required();
  sub_pre->add_option("--size", pre.size, "Common side length")->capture_default_str();
  sub_pre->add_option("--tiles", pre.ahe.tiles_x, "AHE tiles per axis")->capture_default_str();
  sub_pre->add_option("--clip", pre.ahe.clip_limit, "AHE clip limit (fraction of tile pixels)")->capture_default_str();
  sub_pre->add_option("--bins", pre.ahe.bins, "AHE histogram bins")->capture_default_str();
  sub_pre->add_option("--workers", pre_workers, "Worker threads (0 = all cores)");

  std::string gk_out, gk_config;
  auto* sub_gk = app.add_subcommand("gen-kernels", "Dump the Gabor bank as PNG images");
  sub_gk->add_option("--out", gk_out, "Output folder")->required();
  sub_gk->add_option("--config", gk_config, "Landmark config (bank section); defaults when omitted");

  std::string ex_in, ex_bank, ex_out, ex_maps;
  auto* sub_ex = app.add_subcommand("extract", "Compute Gabor feature vectors for a folder");
  sub_ex->add_option("--in", ex_in, "Input folder")->required();
  sub_ex->add_option("--bank", ex_bank, "Landmark config providing bank and preprocess settings");
  sub_ex->add_option("--out", ex_out, "features.csv path")->required();
  sub_ex->add_option("--dump-maps", ex_maps, "Folder for magnitude-map PNGs");

  std::string tr_features, tr_labels, tr_config, tr_out;
  auto* sub_tr = app.add_subcommand("train", "Train the network with scaled conjugate gradient");
  sub_tr->add_option("--features", tr_features, "features.csv")->required();
  sub_tr->add_option("--labels", tr_labels, "labels.csv (path,label; label -1 = non-feature)")->required();
  sub_tr->add_option("--config", tr_config, "Landmark config (train section)");
  sub_tr->add_option("--out", tr_out, "model.json path")->required();

  std::string cl_in, cl_model, cl_bank, cl_matched, cl_unmatched, cl_decisions = "decisions.csv";
  std::optional<double> cl_threshold;
  std::optional<std::string> cl_scan;
  auto* sub_cl = app.add_subcommand("classify", "Split a folder into matched / unmatched copies");
  sub_cl->add_option("--in", cl_in, "Input folder")->required();
  sub_cl->add_option("--model", cl_model, "model.json")->required();
  sub_cl->add_option("--bank", cl_bank, "Landmark config providing bank and preprocess settings");
  sub_cl->add_option("--matched", cl_matched, "Folder receiving matched copies")->required();
  sub_cl->add_option("--unmatched", cl_unmatched, "Folder receiving unmatched copies")->required();
  sub_cl->add_option("--threshold", cl_threshold, "Neuron detection threshold (default 0.8)");
  sub_cl->add_option("--scan", cl_scan, "off | grid3")->check(CLI::IsMember({"off", "grid3"}));
  sub_cl->add_option("--decisions", cl_decisions, "decisions.csv path")->capture_default_str();

  std::string ev_decisions, ev_labels, ev_report;
  bool ev_published = false;
  auto* sub_ev = app.add_subcommand("evaluate", "Confusion counts and precision/recall/accuracy/F1");
  sub_ev->add_option("--decisions", ev_decisions, "decisions.csv");
  sub_ev->add_option("--labels", ev_labels, "labels.csv");
  sub_ev->add_option("--report", ev_report, "report.json path (stdout when omitted)");
  sub_ev->add_flag("--published", ev_published, "Add the published-table consistency section");

  std::string run_config, run_manifest, run_out;
  auto* sub_run = app.add_subcommand("run", "Full pipeline: ingest, train, classify, evaluate");
  sub_run->add_option("--config", run_config, "Landmark config")->required();
  sub_run->add_option("--manifest", run_manifest, "Dataset manifest")->required();
  sub_run->add_option("--out", run_out, "Output folder")->required();

  std::string fx_out, fx_layout = "quadrants";
  std::uint64_t fx_seed = 7;
  int fx_pos = 120, fx_neg = 50, fx_test = 100;
  auto* sub_fx = app.add_subcommand("fixture", "Write the synthetic two-feature dataset");
  sub_fx->add_option("--out", fx_out, "Output folder")->required();
  sub_fx->add_option("--seed", fx_seed, "Generator seed")->capture_default_str();
  sub_fx->add_option("--positives", fx_pos, "Positives per feature")->capture_default_str();
  sub_fx->add_option("--negatives", fx_neg, "Noise negatives")->capture_default_str();
  sub_fx->add_option("--test", fx_test, "Held-out test images")->capture_default_str();
  sub_fx->add_option("--layout", fx_layout, "quadrants | overlay")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }
  log::quiet() = quiet;
  pre.ahe.tiles_y = pre.ahe.tiles_x;

  try {
    if (*sub_pre) return cmd_preprocess(pre_in, pre_out, pre, pre_workers);
    if (*sub_gk) return cmd_gen_kernels(gk_out, gk_config);
    if (*sub_ex) return cmd_extract(ex_in, ex_bank, ex_out, ex_maps);
    if (*sub_tr) return cmd_train(tr_features, tr_labels, tr_config, tr_out);
    if (*sub_cl) return cmd_classify(cl_in, cl_model, cl_bank, cl_matched, cl_unmatched, cl_threshold, cl_scan, cl_decisions);
    if (*sub_ev) return cmd_evaluate(ev_decisions, ev_labels, ev_report, ev_published);
    if (*sub_run) return cmd_run(run_config, run_manifest, run_out);
    if (*sub_fx) return cmd_fixture(fx_out, fx_seed, fx_pos, fx_neg, fx_test, fx_layout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
