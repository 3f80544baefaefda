#include <catch2/catch_amalgamated.hpp>

#include "fsel/metrics.hpp"
#include "fsel/rng.hpp"

using namespace fsel;
using Catch::Approx;

TEST_CASE("confusion matrix tallies and misclassification", "[metrics]") {
  SECTION("perfect predictor is diagonal") {
    ConfusionMatrix cm = confusion({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
    CHECK(cm.misclassified() == 0);
    CHECK(cm.trace() == 4);
  }
  SECTION("off-diagonal sum") {
    ConfusionMatrix cm;
    cm.counts = {{8, 2}, {1, 9}};
    CHECK(cm.misclassified() == 3);
    CHECK(cm.total() == 20);
  }
  SECTION("single wrong prediction") {
    ConfusionMatrix cm = confusion({1}, {0}, 2);
    CHECK(cm.misclassified() == 1);
  }
  SECTION("label out of range") {
    CHECK_THROWS(confusion({3}, {0}, 2));
  }
  SECTION("trace plus misclassified equals total") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      std::size_t n = 1 + rng.next_index(50);
      std::size_t nc = 2 + rng.next_index(4);
      std::vector<int> pred(n), act(n);
      for (std::size_t i = 0; i < n; ++i) {
        pred[i] = static_cast<int>(rng.next_index(nc));
        act[i] = static_cast<int>(rng.next_index(nc));
      }
      ConfusionMatrix cm = confusion(pred, act, nc);
      CHECK(cm.trace() + cm.misclassified() == cm.total());
    }
  }
}

TEST_CASE("relative absolute error against the prior baseline", "[metrics]") {
  SECTION("perfect indicator probabilities give 0") {
    CHECK(relative_absolute_error({{1, 0}, {0, 1}}, {0, 1}) == Approx(0.0));
  }
  SECTION("emitting the prior gives exactly 100") {
    std::vector<std::vector<double>> probs(4, {0.25, 0.75});
    CHECK(relative_absolute_error(probs, {0, 1, 1, 1}) == Approx(100.0));
  }
  SECTION("hand-computed mixed case is 70 percent") {
    CHECK(relative_absolute_error({{0.9, 0.1}, {0.6, 0.4}}, {0, 1}) == Approx(70.0));
  }
  SECTION("single-class data predicted perfectly is 0") {
    CHECK(relative_absolute_error({{1.0}, {1.0}}, {0, 0}) == Approx(0.0));
  }
  SECTION("invariant under instance permutation") {
    std::vector<std::vector<double>> probs = {{0.9, 0.1}, {0.2, 0.8}, {0.5, 0.5}};
    std::vector<int> act = {0, 1, 0};
    double a = relative_absolute_error(probs, act);
    std::vector<std::vector<double>> probs2 = {probs[2], probs[0], probs[1]};
    std::vector<int> act2 = {act[2], act[0], act[1]};
    CHECK(relative_absolute_error(probs2, act2) == Approx(a));
  }
}

TEST_CASE("weighted TP rate", "[metrics]") {
  SECTION("diagonal matrix scores 1") {
    ConfusionMatrix cm;
    cm.counts = {{5, 0}, {0, 7}};
    CHECK(tp_rate_weighted(cm) == Approx(1.0));
  }
  SECTION("hand-computed weighted average") {
    ConfusionMatrix cm;
    cm.counts = {{8, 2}, {1, 9}};
    CHECK(tp_rate_weighted(cm) == Approx(0.85));
  }
  SECTION("empty class contributes zero weight") {
    ConfusionMatrix cm;
    cm.counts = {{4, 0, 0}, {0, 0, 0}, {1, 0, 3}};
    CHECK(tp_rate_weighted(cm) == Approx(7.0 / 8.0));
  }
  SECTION("equals one minus error rate") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
      std::size_t n = 1 + rng.next_index(60);
      std::size_t nc = 2 + rng.next_index(3);
      std::vector<int> pred(n), act(n);
      for (std::size_t i = 0; i < n; ++i) {
        pred[i] = static_cast<int>(rng.next_index(nc));
        act[i] = static_cast<int>(rng.next_index(nc));
      }
      ConfusionMatrix cm = confusion(pred, act, nc);
      double ms = static_cast<double>(cm.misclassified());
      double total = static_cast<double>(cm.total());
      CHECK(tp_rate_weighted(cm) == Approx(1.0 - ms / total).epsilon(1e-9));
    }
  }
}

TEST_CASE("aggregates are plain means at every level", "[metrics]") {
  CHECK(aggregate({3, 5, 7, 2, 3}) == Approx(4.0));
  CHECK(aggregate({42.0}) == Approx(42.0));
  CHECK(aggregate({4.0, 2.5}) == Approx(3.25));
  CHECK(aggregate({4.0, 2.5, 3.0}) == Approx(19.0 / 6.0));
  CHECK_THROWS(aggregate({}));

  SECTION("dataset and suite scores equal brute-force recomputation") {
    std::vector<ClassifierScore> scores;
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
      ClassifierScore s;
      s.classifier = "c" + std::to_string(i);
      s.misclassified = rng.next_index(50);
      s.total = 100;
      s.rae = rng.next_double() * 80.0;
      s.tp_rate = rng.next_double();
      scores.push_back(s);
    }
    DatasetScore ds = dataset_score(scores);
    double ams = 0, arae = 0, atp = 0;
    for (const auto& s : scores) {
      ams += static_cast<double>(s.misclassified);
      arae += s.rae;
      atp += s.tp_rate;
    }
    CHECK(ds.ams == Approx(ams / 5).epsilon(1e-12));
    CHECK(ds.arae == Approx(arae / 5).epsilon(1e-12));
    CHECK(ds.atp_rate == Approx(atp / 5).epsilon(1e-12));

    SuiteScore ss = suite_score({ds, ds, ds});
    CHECK(ss.oams == Approx(ds.ams).epsilon(1e-12));
    CHECK(ss.oarae == Approx(ds.arae).epsilon(1e-12));
    CHECK(ss.oatp_rate == Approx(ds.atp_rate).epsilon(1e-12));
  }
}
