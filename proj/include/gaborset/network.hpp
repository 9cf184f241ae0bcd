#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaborset/features.hpp"

namespace gaborset {

/// Fully connected inputs -> hidden -> outputs network, tanh on both layers.
/// Weights are row-major: w1 is hidden x inputs, w2 is outputs x hidden.
struct MlpModel {
  int inputs = 0;
  int hidden = 0;
  int outputs = 0;
  std::uint64_t seed = 0;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  std::vector<double> b2;

  MlpModel() = default;
  MlpModel(int in, int hid, int out);

  std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

  /// Parameters flattened as [w1, b1, w2, b2]; gradients use the same order.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  bool all_finite() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Uniform [-0.5, 0.5] initialisation from a 64-bit Mersenne twister; the
/// draw does not go through std:: distributions so it is reproducible across
/// standard libraries.
MlpModel init_model(int inputs, int hidden, int outputs, std::uint64_t seed);

/// Patterns and their +1/-1 targets, one row per pattern.
struct TrainingSet {
  std::vector<FeatureVector> patterns;
  std::vector<std::vector<double>> targets;
  std::vector<std::string> sources;  // optional provenance, parallel to patterns

  std::size_t size() const { return patterns.size(); }
  int input_dim() const { return patterns.empty() ? 0 : static_cast<int>(patterns.front().size()); }
  int output_dim() const { return targets.empty() ? 0 : static_cast<int>(targets.front().size()); }

  /// Throws InvalidTrainingSet for empty sets, ragged shapes, targets outside
  /// {+1, -1}, or targets that are all the same value.
  void validate() const;
};

/// Target row for a pattern of candidate feature `feature_index` (-1 = non-feature).
std::vector<double> target_for(int feature_index, int outputs);

/// Throws ShapeError when |x| != model.inputs.
std::vector<double> forward(const MlpModel& m, std::span<const double> x);
inline std::vector<double> forward(const MlpModel& m, const FeatureVector& x) { return forward(m, x.values); }

/// gamma * MSE + (1 - gamma) * mean of squared parameters (weights and biases).
double perf(const MlpModel& m, const TrainingSet& set, double gamma);

/// d perf / d parameter in flatten() order.
std::vector<double> gradient(const MlpModel& m, const TrainingSet& set, double gamma);

struct ScgParams {
  double sigma0 = 1e-5;
  double lambda0 = 1e-7;
  friend bool operator==(const ScgParams&, const ScgParams&) = default;
};

struct TrainConfig {
  int max_epochs = 300;
  double mse_goal = 3.0e-4;
  double grad_goal = 1.0e-6;
  double reg_gamma = 0.9;
  int hidden = 25;
  std::uint64_t seed = 1;
  ScgParams scg;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

enum class StopReason { Epochs, MseGoal, GradGoal, LambdaOverflow };

const char* to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct TrainReport {
  int epochs_run = 0;
  double final_perf = 0.0;
  double final_grad_norm = 0.0;
  StopReason stop_reason = StopReason::Epochs;
  std::vector<double> perf_history;  // entry 0 is the initial perf, then one per epoch
  std::vector<bool> step_accepted;   // one per epoch

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

/// Full-batch scaled conjugate gradient on perf(). Throws
/// InvalidTrainingSet on a degenerate set.
TrainResult scg_train(const TrainingSet& set, const TrainConfig& cfg);

}  // namespace gaborset
