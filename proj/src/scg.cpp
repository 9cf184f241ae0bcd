// Scaled conjugate gradient: conjugate directions,
// curvature from a finite gradient difference along p, and a Levenberg-Marquardt
// style scale lambda that replaces the line search.

#include <cmath>

#include "gaborset/error.hpp"
#include "gaborset/network.hpp"

namespace gaborset {

namespace {

constexpr double kLambdaMax = 1e15;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& p) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * p[i];
  return out;
}

std::vector<double> negated(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

class Objective {
 public:
  Objective(const TrainingSet& set, MlpModel shape, double gamma) : set_(set), model_(std::move(shape)), gamma_(gamma) {}

  double value(const std::vector<double>& w) {
    model_.assign(w);
    return perf(model_, set_, gamma_);
  }
  std::vector<double> grad(const std::vector<double>& w) {
    model_.assign(w);
    return gradient(model_, set_, gamma_);
  }

 private:
  const TrainingSet& set_;
  MlpModel model_;
  double gamma_;
};

void require_finite(const std::vector<double>& v, double perf_value, int epoch) {
  bool ok = std::isfinite(perf_value);
  for (double x : v) ok = ok && std::isfinite(x);
  if (!ok) throw Error(ErrorCode::NumericalError, "non-finite weights or perf at epoch " + std::to_string(epoch));
}

}  // namespace

TrainResult scg_train(const TrainingSet& set, const TrainConfig& cfg) {
  set.validate();
  cfg.validate();

  MlpModel model = init_model(set.input_dim(), cfg.hidden, set.output_dim(), cfg.seed);
  Objective objective(set, model, cfg.reg_gamma);

  std::vector<double> w = model.flatten();
  double e = objective.value(w);
  std::vector<double> r = negated(objective.grad(w));
  std::vector<double> p = r;
  const std::size_t restart_every = w.size();

  double lambda = cfg.scg.lambda0;
  double lambda_bar = 0.0;
  double delta = 0.0;
  double p_norm2 = 0.0;
  bool success = true;
  std::size_t since_restart = 0;

  TrainReport report;
  report.perf_history.push_back(e);
  require_finite(w, e, 0);

  for (int epoch = 0;; ++epoch) {
    const double grad_norm = std::sqrt(dot(r, r));
    report.epochs_run = epoch;
    report.final_perf = e;
    report.final_grad_norm = grad_norm;
    if (e <= cfg.mse_goal) {
      report.stop_reason = StopReason::MseGoal;
      break;
    }
    if (grad_norm <= cfg.grad_goal) {
      report.stop_reason = StopReason::GradGoal;
      break;
    }
    if (lambda > kLambdaMax) {
      report.stop_reason = StopReason::LambdaOverflow;
      break;
    }
    if (epoch >= cfg.max_epochs) {
      report.stop_reason = StopReason::Epochs;
      break;
    }

    if (success) {
      if (dot(p, r) <= 0.0) {
        p = r;
        since_restart = 0;
      }
      p_norm2 = dot(p, p);
      const double sigma = cfg.scg.sigma0 / std::sqrt(p_norm2);
      const std::vector<double> g = negated(r);
      const std::vector<double> g_probe = objective.grad(axpy(w, sigma, p));
      delta = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) delta += p[i] * (g_probe[i] - g[i]) / sigma;
    }

    // Scale the curvature estimate and force it positive definite.
    delta += (lambda - lambda_bar) * p_norm2;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p_norm2);
      delta = -delta + lambda * p_norm2;
      lambda = lambda_bar;
    }

    const double mu = dot(p, r);
    const double alpha = mu / delta;
    const std::vector<double> w_new = axpy(w, alpha, p);
    const double e_new = objective.value(w_new);
    const double comparison = 2.0 * delta * (e - e_new) / (mu * mu);

    if (comparison > 0.0) {
      const std::vector<double> r_new = negated(objective.grad(w_new));
      ++since_restart;
      if (since_restart >= restart_every) {
        p = r_new;
        since_restart = 0;
      } else {
        const double beta = (dot(r_new, r_new) - dot(r_new, r)) / mu;
        p = axpy(r_new, beta, p);
      }
      w = w_new;
      e = e_new;
      r = r_new;
      lambda_bar = 0.0;
      success = true;
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      lambda_bar = lambda;
      success = false;
    }
    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p_norm2;

    require_finite(w, e, epoch + 1);
    report.perf_history.push_back(e);
    report.step_accepted.push_back(success);
  }

  model.assign(w);
  return {std::move(model), std::move(report)};
}

}  // namespace gaborset
