#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gaborset/error.hpp"
#include "gaborset/fixture.hpp"
#include "gaborset/network.hpp"
#include "oracles.hpp"

using namespace gaborset;

namespace {

TrainingSet random_set(std::mt19937_64& rng, int patterns, int dim, int outputs) {
  TrainingSet set;
  for (int p = 0; p < patterns; ++p) {
    set.patterns.push_back(FeatureVector{oracle::random_vector(rng, static_cast<std::size_t>(dim), -1.0, 1.0)});
    set.targets.push_back(target_for(p % (outputs + 1) - 1, outputs));
  }
  return set;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Independent evaluation of mean squared error and mean squared parameter.
std::pair<double, double> hand_terms(const MlpModel& m, const TrainingSet& set) {
  double sse = 0.0;
  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto& x = set.patterns[p].values;
    std::vector<double> h(static_cast<std::size_t>(m.hidden));
    for (int j = 0; j < m.hidden; ++j) {
      double a = m.b1[static_cast<std::size_t>(j)];
      for (int i = 0; i < m.inputs; ++i) a += m.w1[static_cast<std::size_t>(j * m.inputs + i)] * x[static_cast<std::size_t>(i)];
      h[static_cast<std::size_t>(j)] = std::tanh(a);
    }
    for (int k = 0; k < m.outputs; ++k) {
      double a = m.b2[static_cast<std::size_t>(k)];
      for (int j = 0; j < m.hidden; ++j) a += m.w2[static_cast<std::size_t>(k * m.hidden + j)] * h[static_cast<std::size_t>(j)];
      const double e = set.targets[p][static_cast<std::size_t>(k)] - std::tanh(a);
      sse += e * e;
    }
  }
  const auto flat = m.flatten();
  double sq = 0.0;
  for (double w : flat) sq += w * w;
  return {sse / static_cast<double>(set.size() * static_cast<std::size_t>(m.outputs)), sq / static_cast<double>(flat.size())};
}

}  // namespace

TEST_CASE("forward") {
  SUBCASE("zero model outputs zeros") {
    const MlpModel m(100, 25, 3);
    const auto y = forward(m, std::vector<double>(100, 0.7));
    REQUIRE(y.size() == 3);
    for (double v : y) CHECK(v == 0.0);
  }
  SUBCASE("single hidden unit") {
    MlpModel m(100, 1, 1);
    m.w1[0] = 1.0;
    m.w2[0] = 1.0;
    std::vector<double> x(100, 0.0);
    x[0] = 0.5;
    CHECK(forward(m, x)[0] == doctest::Approx(std::tanh(std::tanh(0.5))).epsilon(1e-15));
    CHECK(forward(m, x)[0] == doctest::Approx(0.4318081806).epsilon(1e-9));
  }
  SUBCASE("outputs stay inside (-1, 1)") {
    MlpModel m = init_model(10, 4, 2, 3);
    for (double& w : m.w2) w *= 3.0;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
      for (double v : forward(m, oracle::random_vector(rng, 10, -5.0, 5.0))) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
      }
    }
  }
  SUBCASE("shape mismatch") {
    const MlpModel m(100, 5, 2);
    CHECK_THROWS_AS(forward(m, std::vector<double>(99, 0.0)), Error);
  }
}

TEST_CASE("init_model") {
  const MlpModel a = init_model(100, 25, 2, 42), b = init_model(100, 25, 2, 42), c = init_model(100, 25, 2, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.seed == 42);
  const auto flat = a.flatten();
  CHECK(flat.size() == 100 * 25 + 25 + 25 * 2 + 2);
  CHECK(*std::min_element(flat.begin(), flat.end()) >= -0.5);
  CHECK(*std::max_element(flat.begin(), flat.end()) <= 0.5);
}

TEST_CASE("perf") {
  std::mt19937_64 rng(2);
  const TrainingSet set = random_set(rng, 6, 4, 2);

  SUBCASE("zero model against +/-1 targets") {
    CHECK(perf(MlpModel(4, 3, 2), set, 1.0) == 1.0);
  }
  SUBCASE("perfect outputs have zero error") {
    MlpModel m(4, 1, 1);
    TrainingSet one;
    one.patterns = {FeatureVector{{0, 0, 0, 0}}};
    one.targets = {{std::tanh(0.3)}};
    m.b2[0] = 0.3;
    CHECK(perf(m, one, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("convex combination of the two terms") {
    const MlpModel m = init_model(4, 3, 2, 5);
    const auto [mse, msw] = hand_terms(m, set);
    CHECK(perf(m, set, 1.0) == doctest::Approx(mse).epsilon(1e-13));
    CHECK(perf(m, set, 0.0) == doctest::Approx(msw).epsilon(1e-13));
    CHECK(perf(m, set, 0.9) == doctest::Approx(0.9 * mse + 0.1 * msw).epsilon(1e-13));
    CHECK(0.9 * 0.2 + 0.1 * 0.1 == doctest::Approx(0.19));
  }
}

TEST_CASE("gradient") {
  SUBCASE("matches central differences on random models") {
    std::mt19937_64 rng(10);
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
      const int in = 2 + static_cast<int>(rng() % 5), hid = 1 + static_cast<int>(rng() % 4), out = 1 + static_cast<int>(rng() % 3);
      const TrainingSet set = random_set(rng, 1 + static_cast<int>(rng() % 5) + out, in, out);
      const MlpModel m = init_model(in, hid, out, rng());
      const double gamma = static_cast<double>(rng() % 11) / 10.0;
      const auto a = gradient(m, set, gamma);
      const auto n = oracle::numeric_gradient(m, set, gamma);
      std::vector<double> diff(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - n[i];
      worst = std::max(worst, norm(diff) / std::max(norm(n), 1e-12));
    }
    CHECK(worst <= 1e-4);
  }
  SUBCASE("gamma = 0 leaves only weight decay") {
    std::mt19937_64 rng(11);
    const TrainingSet set = random_set(rng, 5, 3, 2);
    const MlpModel m = init_model(3, 4, 2, 9);
    const auto g = gradient(m, set, 0.0);
    const auto w = m.flatten();
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(g[i] == doctest::Approx(2.0 * w[i] / static_cast<double>(w.size())).epsilon(1e-14));
  }
}

TEST_CASE("TrainingSet validation") {
  TrainingSet empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  TrainingSet same;
  same.patterns = {FeatureVector{{1.0}}, FeatureVector{{2.0}}};
  same.targets = {{1.0}, {1.0}};
  CHECK_THROWS_AS(same.validate(), Error);
  CHECK_THROWS_AS(scg_train(same, TrainConfig{}), Error);
  TrainingSet odd = same;
  odd.targets = {{1.0}, {0.5}};
  CHECK_THROWS_AS(odd.validate(), Error);
  CHECK(target_for(1, 3) == std::vector<double>{-1.0, 1.0, -1.0});
  CHECK(target_for(-1, 2) == std::vector<double>{-1.0, -1.0});
}

TEST_CASE("scg_train") {
  const TrainingSet toy = fixture::toy_blob_set();
  TrainConfig cfg;
  cfg.hidden = 5;
  cfg.seed = 1;

  SUBCASE("zero epochs returns the initial model") {
    TrainConfig c = cfg;
    c.max_epochs = 0;
    const TrainResult r = scg_train(toy, c);
    CHECK(r.model == init_model(100, 5, 2, 1));
    CHECK(r.report.stop_reason == StopReason::Epochs);
    CHECK(r.report.epochs_run == 0);
  }
  SUBCASE("stops before the first epoch when the goal already holds") {
    TrainConfig c = cfg;
    c.mse_goal = 10.0;
    const TrainResult r = scg_train(toy, c);
    CHECK(r.report.stop_reason == StopReason::MseGoal);
    CHECK(r.report.epochs_run == 0);
  }
  SUBCASE("toy blobs are separable and SCG fits them") {
    // Separability first, with plain gradient descent on finite differences.
    const MlpModel start = init_model(100, 5, 2, 1);
    const double before = perf(start, toy, 1.0);
    const double after = oracle::gradient_descent_mse(start, toy, 30, 0.5);
    CHECK(after < 0.25 * before);

    const TrainResult r = scg_train(toy, cfg);
    CHECK(r.report.final_perf <= 1e-2);
    CHECK(r.report.epochs_run <= 300);
    CHECK(r.model.all_finite());
    for (std::size_t e = 1; e < r.report.perf_history.size(); ++e) {
      CHECK(r.report.perf_history[e] <= r.report.perf_history[e - 1]);
    }
    for (const auto& x : toy.patterns) {
      const auto y = forward(r.model, x);
      CHECK(y.size() == 2);
    }
  }
  SUBCASE("reruns are bit-identical") {
    const TrainResult a = scg_train(toy, cfg), b = scg_train(toy, cfg);
    CHECK(a.model == b.model);
    CHECK(a.report == b.report);
  }
  SUBCASE("rejected steps leave the model unchanged") {
    const TrainResult r = scg_train(toy, cfg);
    REQUIRE(r.report.step_accepted.size() == static_cast<std::size_t>(r.report.epochs_run));
    for (std::size_t e = 0; e < r.report.step_accepted.size(); ++e) {
      if (!r.report.step_accepted[e]) CHECK(r.report.perf_history[e + 1] == r.report.perf_history[e]);
    }
  }
}
