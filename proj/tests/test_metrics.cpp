#include <doctest.h>

#include <random>

#include "gaborset/error.hpp"
#include "gaborset/metrics.hpp"

using namespace gaborset;

TEST_CASE("compute on published counts") {
  SUBCASE("Coliseum") {
    const auto m = compute({532, 301, 412, 188});
    CHECK(m.precision == doctest::Approx(0.563559).epsilon(1e-6));
    CHECK(m.recall == doctest::Approx(0.638655).epsilon(1e-6));
    CHECK(m.accuracy == doctest::Approx(0.502442).epsilon(1e-6));
    CHECK(m.f1 == doctest::Approx(0.598762).epsilon(1e-6));
  }
  SUBCASE("Eiffel") {
    const auto m = compute({805, 325, 236, 129});
    CHECK(std::abs(m.precision - 0.773295) < 1e-6);
    CHECK(std::abs(m.recall - 0.712389) < 1e-6);
    CHECK(std::abs(m.accuracy - 0.624749) < 1e-6);
    CHECK(std::abs(m.f1 - 0.741594) < 1e-6);
  }
  SUBCASE("Statue") {
    const auto m = compute({1569, 331, 216, 103});
    CHECK(std::abs(m.precision - 0.878992) < 1e-6);
    CHECK(std::abs(m.recall - 0.825789) < 1e-6);
    CHECK(std::abs(m.accuracy - 0.753493) < 1e-6);
    CHECK(m.f1 == doctest::Approx(3138.0 / 3685.0).epsilon(1e-15));
    CHECK(m.f1 < 1.0);
  }
  SUBCASE("every landmark row: precision, recall, accuracy as printed") {
    for (const auto& row : published_landmark_rows()) {
      const auto m = compute(row.counts);
      CAPTURE(row.name);
      CHECK(std::abs(m.precision - row.precision) < 1e-6);
      CHECK(std::abs(m.recall - row.recall) < 1e-6);
      CHECK(std::abs(m.accuracy - row.accuracy) < 1e-6);
      if (row.table != "3/8") CHECK(std::abs(m.f1 - row.f1) < 1e-6);
    }
  }
}

TEST_CASE("published consistency report") {
  const auto report = check_published();
  std::vector<std::string> bad;
  for (const auto& c : report.checks) {
    if (!c.consistent) bad.push_back(c.name + ":" + c.metric);
  }
  // Only the two printed F1 values above 1 disagree with the formula.
  CHECK(bad == std::vector<std::string>{"Statue:f1", "Two Features:f1", "Three Features:f1"});
  REQUIRE(report.total_mismatches.size() == 4);
  CHECK(report.total_mismatches[0] == "Coliseum: printed total 1520, counts sum to 1433");
  CHECK(report.total_mismatches[1].rfind("Dome:", 0) == 0);
  CHECK(report.total_mismatches[2].rfind("Eiffel:", 0) == 0);
  CHECK(report.total_mismatches[3] == "Pyramid: printed total 1330, counts sum to 1465");
}

TEST_CASE("degenerate counts") {
  const auto m = compute({0, 5, 0, 5});
  CHECK(m.precision == 0.0);
  CHECK(m.precision_degenerate);
  CHECK(m.recall == 0.0);
  CHECK_FALSE(m.recall_degenerate);
  CHECK(m.accuracy == 0.5);
  CHECK(m.f1 == 0.0);
  CHECK_FALSE(m.f1_degenerate);

  const auto neg = compute({0, 0, 0, 7});
  CHECK(neg.precision_degenerate);
  CHECK(neg.recall_degenerate);
  CHECK(neg.f1_degenerate);
  CHECK(neg.accuracy == 1.0);

  CHECK_THROWS_AS(compute({0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(compute({-1, 2, 0, 0}), Error);
}

TEST_CASE("confusion_from_run") {
  std::vector<LabeledDecision> d;
  std::map<std::string, bool> labels;
  for (int i = 0; i < 20; ++i) {
    const std::string p = "img" + std::to_string(i);
    const bool landmark = i < 10;
    labels[p] = landmark;
    d.push_back({p, landmark ? Verdict::Matched : Verdict::Unmatched});
  }
  CHECK(confusion_from_run(d, labels) == ConfusionCounts{10, 0, 0, 10});

  std::map<std::string, bool> inverted;
  for (auto [k, v] : labels) inverted[k] = !v;
  CHECK(confusion_from_run(d, inverted) == ConfusionCounts{0, 10, 10, 0});

  d.push_back({"unlabelled", Verdict::Matched});
  CHECK_THROWS_AS(confusion_from_run(d, labels), Error);
}

TEST_CASE("aggregation") {
  const auto& rows = published_landmark_rows();
  CHECK(rows[0].counts + rows[1].counts == published_aggregate_rows()[0].counts);
  CHECK(rows[0].counts + rows[1].counts == ConfusionCounts{1023, 634, 819, 357});

  // Counts of a concatenated run are the sum of the per-run counts.
  std::mt19937_64 rng(1);
  std::vector<LabeledDecision> a, b;
  std::map<std::string, bool> labels;
  for (int i = 0; i < 60; ++i) {
    const std::string p = "p" + std::to_string(i);
    labels[p] = rng() % 2;
    (i < 25 ? a : b).push_back({p, rng() % 2 ? Verdict::Matched : Verdict::Unmatched});
  }
  std::vector<LabeledDecision> all = a;
  all.insert(all.end(), b.begin(), b.end());
  CHECK(confusion_from_run(all, labels) == confusion_from_run(a, labels) + confusion_from_run(b, labels));
}

TEST_CASE("metric identities on random counts") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionCounts c{static_cast<std::int64_t>(rng() % 50), static_cast<std::int64_t>(rng() % 50),
                            static_cast<std::int64_t>(rng() % 50), static_cast<std::int64_t>(rng() % 50) + 1};
    const auto m = compute(c);
    for (double v : {m.precision, m.recall, m.accuracy, m.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    if (m.precision + m.recall > 0) {
      CHECK(std::abs(m.f1 - 2 * m.precision * m.recall / (m.precision + m.recall)) <= 1e-12);
      CHECK(m.f1 >= std::min(m.precision, m.recall) - 1e-15);
      CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-15);
    }
  }
}
