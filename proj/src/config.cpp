#include "gaborset/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gaborset/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gaborset {

void RoiSpec::validate() const {
  const bool ok = x >= 0.0 && y >= 0.0 && w > 0.0 && h > 0.0 && x + w <= 1.0 + 1e-12 && y + h <= 1.0 + 1e-12;
  if (!ok) throw Error(ErrorCode::ConfigError, "ROI must lie inside the unit square with positive size");
  if (feature_index < 0) throw Error(ErrorCode::ConfigError, "ROI feature_index must be >= 0");
}

void LandmarkConfig::validate() const {
  if (candidate_features.empty() || candidate_features.size() > 8) {
    throw Error(ErrorCode::ConfigError, "a landmark needs 1 to 8 candidate features");
  }
  std::vector<bool> seen(candidate_features.size(), false);
  for (const auto& roi : candidate_features) {
    roi.validate();
    const auto idx = static_cast<std::size_t>(roi.feature_index);
    if (idx >= seen.size() || seen[idx]) {
      throw Error(ErrorCode::ConfigError, "feature indices must be a permutation of 0..N-1");
    }
    seen[idx] = true;
  }
  preprocess.validate();
  train.validate();
  if (bank.kernel_size > preprocess.size) throw Error(ErrorCode::ConfigError, "kernel_size exceeds preprocess size");
  try {
    (void)make_bank(bank.frequencies, bank.orientations, 3, bank.envelope_ratio);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (bank.kernel_size < 3 || bank.kernel_size % 2 == 0) throw Error(ErrorCode::ConfigError, "kernel_size must be odd and >= 3");
  if (!std::isfinite(threshold)) throw Error(ErrorCode::ConfigError, "threshold must be finite");
  if (workers < 0) throw Error(ErrorCode::ConfigError, "workers must be >= 0");
}

void to_json(json& j, const RoiSpec& r) {
  j = json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}, {"feature_index", r.feature_index}};
}

void from_json(const json& j, RoiSpec& r) {
  r.x = j.value("x", r.x);
  r.y = j.value("y", r.y);
  r.w = j.value("w", r.w);
  r.h = j.value("h", r.h);
  r.feature_index = j.value("feature_index", r.feature_index);
}

void to_json(json& j, const LandmarkConfig& c) {
  j = json{
      {"name", c.name},
      {"candidate_features", c.candidate_features},
      {"bank",
       {{"frequencies", c.bank.frequencies},
        {"orientations", c.bank.orientations},
        {"kernel_size", c.bank.kernel_size},
        {"envelope_ratio", c.bank.envelope_ratio}}},
      {"preprocess",
       {{"size", c.preprocess.size},
        {"tiles_x", c.preprocess.ahe.tiles_x},
        {"tiles_y", c.preprocess.ahe.tiles_y},
        {"clip_limit", c.preprocess.ahe.clip_limit},
        {"bins", c.preprocess.ahe.bins}}},
      {"train",
       {{"max_epochs", c.train.max_epochs},
        {"mse_goal", c.train.mse_goal},
        {"grad_goal", c.train.grad_goal},
        {"reg_gamma", c.train.reg_gamma},
        {"hidden", c.train.hidden},
        {"seed", c.train.seed},
        {"sigma0", c.train.scg.sigma0},
        {"lambda0", c.train.scg.lambda0}}},
      {"threshold", c.threshold},
      {"scan", to_string(c.scan)},
      {"workers", c.workers},
  };
}

void from_json(const json& j, LandmarkConfig& c) {
  c.name = j.value("name", c.name);
  if (j.contains("candidate_features")) c.candidate_features = j.at("candidate_features").get<std::vector<RoiSpec>>();
  if (j.contains("bank")) {
    const json& b = j.at("bank");
    c.bank.frequencies = b.value("frequencies", c.bank.frequencies);
    if (b.contains("orientations")) {
      const json& o = b.at("orientations");
      // Either an explicit list of radians or a count of uniformly spaced angles.
      c.bank.orientations = o.is_number_integer() ? BankConfig::uniform_orientations(o.get<int>())
                                                  : o.get<std::vector<double>>();
    }
    c.bank.kernel_size = b.value("kernel_size", c.bank.kernel_size);
    c.bank.envelope_ratio = b.value("envelope_ratio", c.bank.envelope_ratio);
  }
  if (j.contains("preprocess")) {
    const json& p = j.at("preprocess");
    c.preprocess.size = p.value("size", c.preprocess.size);
    c.preprocess.ahe.tiles_x = p.value("tiles_x", c.preprocess.ahe.tiles_x);
    c.preprocess.ahe.tiles_y = p.value("tiles_y", c.preprocess.ahe.tiles_y);
    c.preprocess.ahe.clip_limit = p.value("clip_limit", c.preprocess.ahe.clip_limit);
    c.preprocess.ahe.bins = p.value("bins", c.preprocess.ahe.bins);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
    c.train.mse_goal = t.value("mse_goal", c.train.mse_goal);
    c.train.grad_goal = t.value("grad_goal", c.train.grad_goal);
    c.train.reg_gamma = t.value("reg_gamma", c.train.reg_gamma);
    c.train.hidden = t.value("hidden", c.train.hidden);
    c.train.seed = t.value("seed", c.train.seed);
    c.train.scg.sigma0 = t.value("sigma0", c.train.scg.sigma0);
    c.train.scg.lambda0 = t.value("lambda0", c.train.scg.lambda0);
  }
  c.threshold = j.value("threshold", c.threshold);
  if (j.contains("scan")) c.scan = scan_mode_from_string(j.at("scan").get<std::string>());
  c.workers = j.value("workers", c.workers);
}

LandmarkConfig parse_config(const std::string& text) {
  LandmarkConfig cfg;
  try {
    json::parse(text).get_to(cfg);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  cfg.validate();
  return cfg;
}

LandmarkConfig load_config(const fs::path& path) {
  try {
    return parse_config(read_text(path));
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

std::string serialize_config(const LandmarkConfig& cfg) { return json(cfg).dump(2) + "\n"; }

void apply_env_overrides(LandmarkConfig& cfg) {
  const char* env = std::getenv("GABORSET_SEED");
  if (env == nullptr || *env == '\0') return;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) throw Error(ErrorCode::ConfigError, "GABORSET_SEED is not an unsigned integer");
  cfg.train.seed = seed;
}

void DatasetManifest::validate() const {
  if (feature_dirs.empty()) throw Error(ErrorCode::ConfigError, "manifest lists no feature directories");
  auto require_dir = [](const fs::path& p, const char* what) {
    std::error_code ec;
    if (!fs::is_directory(p, ec)) throw Error(ErrorCode::ConfigError, std::string(what) + " is not a directory: " + p.string());
  };
  for (const auto& d : feature_dirs) require_dir(d, "feature_dir");
  require_dir(nonfeature_dir, "nonfeature_dir");
  require_dir(test_dir, "test_dir");
  if (test_labels && !fs::is_regular_file(*test_labels)) {
    throw Error(ErrorCode::ConfigError, "test_labels file not found: " + test_labels->string());
  }
}

DatasetManifest load_manifest(const fs::path& path) {
  DatasetManifest m;
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    const json j = json::parse(read_text(path));
    for (const auto& d : j.at("feature_dirs")) m.feature_dirs.push_back(resolve(d.get<std::string>()));
    m.nonfeature_dir = resolve(j.at("nonfeature_dir").get<std::string>());
    m.test_dir = resolve(j.at("test_dir").get<std::string>());
    if (j.contains("test_labels") && !j.at("test_labels").is_null()) {
      m.test_labels = resolve(j.at("test_labels").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return m;
}

std::string serialize_manifest(const DatasetManifest& m) {
  json j;
  j["feature_dirs"] = json::array();
  for (const auto& d : m.feature_dirs) j["feature_dirs"].push_back(d.string());
  j["nonfeature_dir"] = m.nonfeature_dir.string();
  j["test_dir"] = m.test_dir.string();
  if (m.test_labels) j["test_labels"] = m.test_labels->string();
  return j.dump(2) + "\n";
}

json report_to_json(const TrainReport& r) {
  return json{{"epochs_run", r.epochs_run},
              {"final_perf", r.final_perf},
              {"final_grad_norm", r.final_grad_norm},
              {"stop_reason", to_string(r.stop_reason)},
              {"perf_history", r.perf_history},
              {"step_accepted", r.step_accepted}};
}

TrainReport report_from_json(const json& j) {
  TrainReport r;
  r.epochs_run = j.at("epochs_run").get<int>();
  r.final_perf = j.at("final_perf").get<double>();
  r.final_grad_norm = j.at("final_grad_norm").get<double>();
  r.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  r.perf_history = j.at("perf_history").get<std::vector<double>>();
  r.step_accepted = j.value("step_accepted", std::vector<bool>{});
  return r;
}

json model_to_json(const MlpModel& m, const TrainReport* report) {
  json j{{"input", m.inputs}, {"hidden", m.hidden}, {"outputs", m.outputs}, {"activation", "tanh"},
         {"seed", m.seed},    {"w1", m.w1},         {"b1", m.b1},           {"w2", m.w2},
         {"b2", m.b2}};
  j["train_report"] = report ? report_to_json(*report) : json(nullptr);
  return j;
}

MlpModel model_from_json(const json& j) {
  try {
    if (j.value("activation", std::string("tanh")) != "tanh") {
      throw Error(ErrorCode::ConfigError, "only tanh activation is supported");
    }
    MlpModel m(j.at("input").get<int>(), j.at("hidden").get<int>(), j.at("outputs").get<int>());
    m.seed = j.value("seed", std::uint64_t{0});
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    const MlpModel shape(m.inputs, m.hidden, m.outputs);
    if (m.w1.size() != shape.w1.size() || m.b1.size() != shape.b1.size() || m.w2.size() != shape.w2.size() ||
        m.b2.size() != shape.b2.size()) {
      throw Error(ErrorCode::ConfigError, "model arrays do not match declared layer sizes");
    }
    if (!m.all_finite()) throw Error(ErrorCode::ConfigError, "model contains non-finite weights");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad model file: ") + e.what());
  }
}

void save_model(const fs::path& path, const MlpModel& m, const TrainReport* report) {
  write_text(path, model_to_json(m, report).dump(2) + "\n");
}

MlpModel load_model(const fs::path& path) {
  try {
    return model_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace gaborset
