#include "gaborset/network.hpp"

#include <cmath>
#include <random>

#include "gaborset/error.hpp"

namespace gaborset {

MlpModel::MlpModel(int in, int hid, int out)
    : inputs(in),
      hidden(hid),
      outputs(out),
      w1(static_cast<std::size_t>(hid) * in, 0.0),
      b1(static_cast<std::size_t>(hid), 0.0),
      w2(static_cast<std::size_t>(out) * hid, 0.0),
      b2(static_cast<std::size_t>(out), 0.0) {
  if (in < 1 || hid < 1 || out < 1) throw Error(ErrorCode::ShapeError, "network layer sizes must be >= 1");
}

std::vector<double> MlpModel::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto* part : {&w1, &b1, &w2, &b2}) flat.insert(flat.end(), part->begin(), part->end());
  return flat;
}

void MlpModel::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw Error(ErrorCode::ShapeError, "parameter vector length mismatch");
  auto it = flat.begin();
  for (auto* part : {&w1, &b1, &w2, &b2}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(part->size()), part->begin());
    it += static_cast<std::ptrdiff_t>(part->size());
  }
}

bool MlpModel::all_finite() const {
  for (const auto* part : {&w1, &b1, &w2, &b2}) {
    for (double v : *part) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

MlpModel init_model(int inputs, int hidden, int outputs, std::uint64_t seed) {
  MlpModel m(inputs, hidden, outputs);
  m.seed = seed;
  std::mt19937_64 rng(seed);
  for (auto* part : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (double& v : *part) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  return m;
}

void TrainingSet::validate() const {
  if (patterns.empty()) throw Error(ErrorCode::InvalidTrainingSet, "no patterns");
  if (patterns.size() != targets.size()) throw Error(ErrorCode::InvalidTrainingSet, "patterns/targets length mismatch");
  const std::size_t in = patterns.front().size();
  const std::size_t out = targets.front().size();
  if (in == 0 || out == 0) throw Error(ErrorCode::InvalidTrainingSet, "empty pattern or target");
  bool seen_pos = false;
  bool seen_neg = false;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].size() != in || targets[i].size() != out) {
      throw Error(ErrorCode::InvalidTrainingSet, "ragged pattern/target at index " + std::to_string(i));
    }
    for (double v : patterns[i].values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidTrainingSet, "non-finite feature value");
    }
    for (double t : targets[i]) {
      if (t == 1.0) {
        seen_pos = true;
      } else if (t == -1.0) {
        seen_neg = true;
      } else {
        throw Error(ErrorCode::InvalidTrainingSet, "target entries must be +1 or -1");
      }
    }
  }
  if (!seen_pos || !seen_neg) throw Error(ErrorCode::InvalidTrainingSet, "all targets are equal");
}

std::vector<double> target_for(int feature_index, int outputs) {
  std::vector<double> t(static_cast<std::size_t>(outputs), -1.0);
  if (feature_index >= 0) {
    if (feature_index >= outputs) throw Error(ErrorCode::InvalidTrainingSet, "feature index out of range");
    t[static_cast<std::size_t>(feature_index)] = 1.0;
  }
  return t;
}

namespace {

struct Activations {
  std::vector<double> hidden;
  std::vector<double> output;
};

Activations run(const MlpModel& m, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(m.inputs)) {
    throw Error(ErrorCode::ShapeError,
                "input has " + std::to_string(x.size()) + " values, model expects " + std::to_string(m.inputs));
  }
  Activations a;
  a.hidden.resize(static_cast<std::size_t>(m.hidden));
  for (int h = 0; h < m.hidden; ++h) {
    const double* row = m.w1.data() + static_cast<std::size_t>(h) * m.inputs;
    double s = m.b1[static_cast<std::size_t>(h)];
    for (int i = 0; i < m.inputs; ++i) s += row[i] * x[static_cast<std::size_t>(i)];
    a.hidden[static_cast<std::size_t>(h)] = std::tanh(s);
  }
  a.output.resize(static_cast<std::size_t>(m.outputs));
  for (int o = 0; o < m.outputs; ++o) {
    const double* row = m.w2.data() + static_cast<std::size_t>(o) * m.hidden;
    double s = m.b2[static_cast<std::size_t>(o)];
    for (int h = 0; h < m.hidden; ++h) s += row[h] * a.hidden[static_cast<std::size_t>(h)];
    a.output[static_cast<std::size_t>(o)] = std::tanh(s);
  }
  return a;
}

double mean_square_params(const MlpModel& m) {
  double sq = 0.0;
  for (const auto* part : {&m.w1, &m.b1, &m.w2, &m.b2}) {
    for (double v : *part) sq += v * v;
  }
  return sq / static_cast<double>(m.parameter_count());
}

void check_shapes(const MlpModel& m, const TrainingSet& set) {
  if (set.input_dim() != m.inputs || set.output_dim() != m.outputs) {
    throw Error(ErrorCode::ShapeError, "training set shape does not match model");
  }
}

}  // namespace

std::vector<double> forward(const MlpModel& m, std::span<const double> x) { return run(m, x).output; }

double perf(const MlpModel& m, const TrainingSet& set, double gamma) {
  check_shapes(m, set);
  double sse = 0.0;
  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto y = run(m, set.patterns[p].values).output;
    for (std::size_t o = 0; o < y.size(); ++o) {
      const double e = set.targets[p][o] - y[o];
      sse += e * e;
    }
  }
  const double mse = sse / (static_cast<double>(set.size()) * m.outputs);
  return gamma * mse + (1.0 - gamma) * mean_square_params(m);
}

std::vector<double> gradient(const MlpModel& m, const TrainingSet& set, double gamma) {
  check_shapes(m, set);
  const auto in = static_cast<std::size_t>(m.inputs);
  const auto hid = static_cast<std::size_t>(m.hidden);
  const auto out = static_cast<std::size_t>(m.outputs);
  const std::size_t off_b1 = m.w1.size();
  const std::size_t off_w2 = off_b1 + m.b1.size();
  const std::size_t off_b2 = off_w2 + m.w2.size();

  std::vector<double> g(m.parameter_count(), 0.0);
  std::vector<double> d_out(out);
  std::vector<double> d_hid(hid);
  const double mse_scale = 2.0 * gamma / (static_cast<double>(set.size()) * m.outputs);

  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto& x = set.patterns[p].values;
    const Activations a = run(m, x);
    for (std::size_t o = 0; o < out; ++o) {
      const double y = a.output[o];
      d_out[o] = mse_scale * (y - set.targets[p][o]) * (1.0 - y * y);
    }
    for (std::size_t h = 0; h < hid; ++h) {
      double s = 0.0;
      for (std::size_t o = 0; o < out; ++o) s += m.w2[o * hid + h] * d_out[o];
      d_hid[h] = s * (1.0 - a.hidden[h] * a.hidden[h]);
    }
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t h = 0; h < hid; ++h) g[off_w2 + o * hid + h] += d_out[o] * a.hidden[h];
      g[off_b2 + o] += d_out[o];
    }
    for (std::size_t h = 0; h < hid; ++h) {
      for (std::size_t i = 0; i < in; ++i) g[h * in + i] += d_hid[h] * x[i];
      g[off_b1 + h] += d_hid[h];
    }
  }

  const double reg_scale = 2.0 * (1.0 - gamma) / static_cast<double>(m.parameter_count());
  const auto flat = m.flatten();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += reg_scale * flat[i];
  return g;
}

void TrainConfig::validate() const {
  if (max_epochs < 0) throw Error(ErrorCode::ConfigError, "max_epochs must be >= 0");
  if (!(mse_goal > 0.0) || !(grad_goal > 0.0)) throw Error(ErrorCode::ConfigError, "training goals must be > 0");
  if (!(reg_gamma >= 0.0 && reg_gamma <= 1.0)) throw Error(ErrorCode::ConfigError, "reg_gamma must be in [0, 1]");
  if (hidden < 1) throw Error(ErrorCode::ConfigError, "hidden must be >= 1");
  if (!(scg.sigma0 > 0.0) || !(scg.lambda0 > 0.0)) throw Error(ErrorCode::ConfigError, "SCG constants must be > 0");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Epochs: return "epochs";
    case StopReason::MseGoal: return "mse_goal";
    case StopReason::GradGoal: return "grad_goal";
    case StopReason::LambdaOverflow: return "lambda_overflow";
  }
  return "epochs";
}

StopReason stop_reason_from_string(const std::string& s) {
  if (s == "epochs") return StopReason::Epochs;
  if (s == "mse_goal") return StopReason::MseGoal;
  if (s == "grad_goal") return StopReason::GradGoal;
  if (s == "lambda_overflow") return StopReason::LambdaOverflow;
  throw Error(ErrorCode::ConfigError, "unknown stop reason '" + s + "'");
}

}  // namespace gaborset
