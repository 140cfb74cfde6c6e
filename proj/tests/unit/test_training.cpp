#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"
#include "rankcount/synthdata.hpp"
#include "rankcount/training.hpp"
#include "test_support.hpp"

using namespace rankcount;
using rankcount::testing::TempDir;

namespace {

// Images whose features are increasing in the count.
struct Separable {
  FeatureTable features;
  CountMap counts;
  std::vector<RankingPair> pairs;
};

Separable separable_set(std::size_t n_images, std::size_t n_pairs, std::uint64_t seed) {
  Rng rng(seed);
  Separable s;
  for (std::size_t k = 0; k < n_images; ++k) {
    const std::string id = "im" + std::to_string(k);
    const auto c = static_cast<std::int64_t>(10 + rng.index(490));
    s.counts[id] = c;
    s.features[id] = {static_cast<double>(c) + 0.01 * rng.normal(), std::sqrt(static_cast<double>(c))};
  }
  s.pairs = autolabel_pairs(s.counts, 1.5, n_pairs, seed);
  return s;
}

double pair_loss(const PotentialModel& m, const std::vector<double>& hi, const std::vector<double>& lo,
                 double margin) {
  return hinge_loss(forward(m, hi), forward(m, lo), margin, MarginSign::standard_plus);
}

}  // namespace

TEST(Hinge, Examples) {
  EXPECT_NEAR(hinge_loss(2.0, 1.0, 0.5, MarginSign::standard_plus), 0.0, 1e-9);
  EXPECT_NEAR(hinge_loss(0.4, 0.2, 0.5, MarginSign::standard_plus), 0.3, 1e-9);
  EXPECT_NEAR(hinge_loss(0.4, 0.2, 0.5, MarginSign::paper_literal_minus), 0.0, 1e-9);
  EXPECT_EQ(hinge_loss(1.0, 1.0, 0.0, MarginSign::standard_plus), 0.0);
  EXPECT_EQ(hinge_loss(1.0, 1.0, 0.0, MarginSign::paper_literal_minus), 0.0);
  EXPECT_NEAR(hinge_loss(0.0, 2.0, 0.5, MarginSign::paper_literal_minus), 1.5, 1e-9);
}

TEST(Hinge, Subgradient) {
  const auto active = hinge_subgradient(0.4, 0.2, 0.5, MarginSign::standard_plus);
  EXPECT_EQ(active.d_hi, -1.0);
  EXPECT_EQ(active.d_lo, 1.0);
  const auto idle = hinge_subgradient(2.0, 1.0, 0.5, MarginSign::standard_plus);
  EXPECT_EQ(idle.d_hi, 0.0);
  EXPECT_EQ(idle.d_lo, 0.0);
}

TEST(HardFilter, Examples) {
  EXPECT_EQ(hard_filter(10.0, 0.5, 10.0), FilterDecision::abandon);
  EXPECT_EQ(hard_filter(0.5, 10.0, 10.0), FilterDecision::abandon);
  EXPECT_EQ(hard_filter(2.0, 1.0, 10.0), FilterDecision::keep);
  EXPECT_EQ(hard_filter(1.0, -0.2, 1.01), FilterDecision::keep);
  EXPECT_EQ(hard_filter(0.0, 5.0, 1.01), FilterDecision::keep);
}

TEST(Regression, Examples) {
  EXPECT_EQ(regression_loss(0.25, 50, 200), 0.0);
  EXPECT_NEAR(regression_loss(0.5, 100, 200), 0.0, 1e-9);
  EXPECT_NEAR(regression_loss(1.0, 100, 200), 0.25, 1e-9);
  EXPECT_NEAR(regression_gradient(1.0, 100, 200), 1.0, 1e-12);
}

TEST(Regression, DefaultCountNorm) {
  const CountMap d{{"a", 10}, {"b", 400}, {"c", 0}};
  EXPECT_DOUBLE_EQ(default_count_norm(d, 0.5), 20.0);
  EXPECT_DOUBLE_EQ(default_count_norm(d, 0.0), 400.0);
  EXPECT_DOUBLE_EQ(default_count_norm({{"a", 300}, {"b", 400}}, 0.5), 400.0);
  EXPECT_DOUBLE_EQ(default_count_norm({{"a", 0}}, 0.5), 1.0);
}

TEST(Train, SeparableFeaturesReachFullAccuracyQuickly) {
  const auto s = separable_set(40, 100, 1);
  ASSERT_EQ(s.pairs.size(), 100u);
  TrainConfig cfg;
  cfg.lr = 1e-2;
  cfg.epochs = 5;
  cfg.seed = 3;
  auto init = prepare_model(s.features, {}, 2);
  const auto [model, report] = train(s.features, s.pairs, {}, cfg, init);
  EXPECT_EQ(report.epochs.back().rank_acc, 1.0);
  EXPECT_EQ(training_rank_accuracy(model, s.features, s.pairs), 1.0);
  for (const auto& e : report.epochs) {
    EXPECT_GE(e.rank_loss, 0.0);
    EXPECT_EQ(e.reg_loss, 0.0);
    EXPECT_EQ(e.pairs_seen, 100u);
    EXPECT_LE(e.abandoned, e.pairs_seen);
  }
}

TEST(Train, HybridDegeneratesWithoutRegressionTerm) {
  const auto s = separable_set(30, 80, 2);
  auto init = prepare_model(s.features, {4}, 5);
  TrainConfig plain;
  plain.lr = 1e-3;
  plain.epochs = 3;
  plain.seed = 9;
  const auto [reference, ref_report] = train(s.features, s.pairs, {}, plain, init);

  TrainConfig zero_alpha = plain;
  zero_alpha.alpha = 0.0;
  const auto [a, a_report] = train(s.features, s.pairs, s.counts, zero_alpha, init);
  EXPECT_EQ(a, reference);

  TrainConfig hybrid = plain;
  hybrid.alpha = 1.0;
  const auto [b, b_report] = train(s.features, s.pairs, {}, hybrid, init);
  EXPECT_EQ(b, reference);

  const auto [c, c_report] = train(s.features, s.pairs, s.counts, hybrid, init);
  EXPECT_NE(c, reference);
  EXPECT_GT(c_report.epochs.front().reg_loss, 0.0);
}

TEST(Train, TightFilterAbandonsPairsOfConvergedModel) {
  const auto s = separable_set(40, 100, 4);
  // Potential equal to the count feature: every pair is ordered and positive.
  PotentialModel converged({2, 1});
  converged.weights(0)[0] = 1.0;
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.filter_threshold = 1.01;
  const auto [model, report] = train(s.features, s.pairs, {}, cfg, converged);
  EXPECT_EQ(report.epochs[0].abandoned, report.epochs[0].pairs_seen);
  EXPECT_EQ(model, converged);
  cfg.filter_threshold.reset();
  const auto [model2, report2] = train(s.features, s.pairs, {}, cfg, converged);
  EXPECT_EQ(report2.epochs[0].abandoned, 0u);
}

TEST(Train, SeparatedPairLeavesParametersUnchanged) {
  FeatureTable features{{"hi", {10.0}}, {"lo", {1.0}}};
  PotentialModel model({1, 1});
  model.weights(0)[0] = 1.0;
  TrainConfig cfg;
  cfg.epochs = 1;
  const std::vector<RankingPair> pairs{{"hi", "lo", Provenance::manual}};
  const auto [after, report] = train(features, pairs, {}, cfg, model);
  EXPECT_EQ(after, model);
  EXPECT_EQ(report.optimizer_steps, 0u);
}

TEST(Train, ViolatedPairMovesPotentialsApart) {
  FeatureTable features{{"hi", {1.0}}, {"lo", {2.0}}};
  PotentialModel model({1, 1});
  model.weights(0)[0] = 1.0;
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.lr = 0.1;
  const std::vector<RankingPair> pairs{{"hi", "lo", Provenance::manual}};
  const auto [after, report] = train(features, pairs, {}, cfg, model);
  EXPECT_LT(after.weights(0)[0], 1.0);
  EXPECT_EQ(report.optimizer_steps, 1u);
}

TEST(Train, PairLossGradientMatchesFiniteDifferences) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto model = PotentialModel::initialize({6, 8, 1}, rng.next());
    std::vector<double> hi(6), lo(6);
    for (auto& x : hi) x = rng.normal();
    for (auto& x : lo) x = rng.normal();
    const auto th = forward_trace(model, hi);
    const auto tl = forward_trace(model, lo);
    const double margin = std::abs(th.potential() - tl.potential()) + 1.0;
    const auto g = hinge_subgradient(th.potential(), tl.potential(), margin, MarginSign::standard_plus);
    ASSERT_NE(g.d_hi, 0.0);
    std::vector<double> analytic(model.parameter_count(), 0.0);
    accumulate_backward(model, th, g.d_hi, analytic);
    accumulate_backward(model, tl, g.d_lo, analytic);
    auto params = model.parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double saved = params[k];
      params[k] = saved + 1e-5;
      const double up = pair_loss(model, hi, lo, margin);
      params[k] = saved - 1e-5;
      const double down = pair_loss(model, hi, lo, margin);
      params[k] = saved;
      const double numeric = (up - down) / 2e-5;
      const double scale = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-6});
      ASSERT_LT(std::abs(numeric - analytic[k]) / scale, 1e-4);
    }
  }
}

TEST(Train, IsDeterministicInSeed) {
  const auto s = separable_set(30, 60, 6);
  auto init = prepare_model(s.features, {3}, 4);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.seed = 12;
  EXPECT_EQ(train(s.features, s.pairs, s.counts, cfg, init).first,
            train(s.features, s.pairs, s.counts, cfg, init).first);
  TrainConfig other = cfg;
  other.seed = 13;
  EXPECT_NE(train(s.features, s.pairs, s.counts, cfg, init).first,
            train(s.features, s.pairs, s.counts, other, init).first);
}

TEST(Train, RejectsBadInputs) {
  const auto s = separable_set(10, 10, 7);
  const auto init = prepare_model(s.features, {}, 0);
  TrainConfig cfg;
  EXPECT_THROW(train(s.features, {}, {}, cfg, init), DomainError);
  const std::vector<RankingPair> unknown{{"nope", "im0", Provenance::manual}};
  EXPECT_THROW(train(s.features, unknown, {}, cfg, init), DomainError);
  TrainConfig bad = cfg;
  bad.margin = -1.0;
  EXPECT_THROW(train(s.features, s.pairs, {}, bad, init), DomainError);
  bad = cfg;
  bad.filter_threshold = 1.0;
  EXPECT_THROW(train(s.features, s.pairs, {}, bad, init), DomainError);
  bad = cfg;
  bad.epochs = 0;
  EXPECT_THROW(train(s.features, s.pairs, {}, bad, init), DomainError);
}

TEST(TrainReport, CsvColumns) {
  TempDir dir;
  TrainReport r;
  r.epochs.push_back({1, 0.5, 0.25, 3, 10, 0.75});
  write_train_report(dir / "r.csv", r);
  EXPECT_EQ(csv::read_text(dir / "r.csv"), "epoch,rank_loss,reg_loss,abandoned,rank_acc\n1,0.5,0.25,3,0.75\n");
}
