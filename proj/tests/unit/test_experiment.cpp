#include <gtest/gtest.h>

#include <cmath>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/experiment.hpp"
#include "test_support.hpp"

using namespace rankcount;
using rankcount::testing::TempDir;

namespace {

ExperimentSpec small_spec(TrainMode mode, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.data.n = 60;
  spec.data.width = spec.data.height = 96;
  spec.data.count_min = 10;
  spec.data.count_max = 200;
  spec.train.epochs = 3;
  spec.mode = mode;
  spec.anchors = 5;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST(Experiment, ModeParsingRoundTrips) {
  for (auto m : {TrainMode::ranking_only, TrainMode::hybrid, TrainMode::fully}) {
    EXPECT_EQ(parse_train_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_train_mode("semi"), DomainError);
  for (auto p : {SweepParameter::margin, SweepParameter::anchor_size, SweepParameter::ratio}) {
    EXPECT_EQ(parse_sweep_parameter(to_string(p)), p);
  }
  EXPECT_THROW(parse_sweep_parameter("lr"), DomainError);
}

TEST(Experiment, DerivedSeedsDifferPerStage) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Experiment, RankingOnlyForcesZeroAlpha) {
  auto spec = small_spec(TrainMode::ranking_only, 1);
  spec.train.alpha = 3.0;
  EXPECT_EQ(effective_train_config(spec).alpha, 0.0);
  spec.mode = TrainMode::hybrid;
  EXPECT_EQ(effective_train_config(spec).alpha, 3.0);
}

TEST(Experiment, RegressionSetPerMode) {
  const CountMap train{{"a", 1}, {"b", 5}, {"c", 9}};
  AnchorSet anchors;
  anchors.entries.push_back({"b", 5});
  EXPECT_TRUE(regression_set_for(TrainMode::ranking_only, anchors, train).empty());
  EXPECT_EQ(regression_set_for(TrainMode::hybrid, anchors, train), (CountMap{{"b", 5}}));
  EXPECT_EQ(regression_set_for(TrainMode::fully, anchors, train), train);
}

TEST(Experiment, WithParameterAppliesValue) {
  const ExperimentSpec base;
  EXPECT_EQ(with_parameter(base, SweepParameter::margin, 3.0).train.margin, 3.0);
  EXPECT_EQ(with_parameter(base, SweepParameter::anchor_size, 30.0).anchors, 30u);
  EXPECT_EQ(with_parameter(base, SweepParameter::ratio, 1.5).ratio, 1.5);
  EXPECT_THROW(with_parameter(base, SweepParameter::anchor_size, 2.5), DomainError);
  EXPECT_THROW(with_parameter(base, SweepParameter::anchor_size, 1.0), DomainError);
}

TEST(Experiment, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_THROW(median({}), DomainError);
}

TEST(Experiment, RunIsDeterministicAndComplete) {
  const auto spec = small_spec(TrainMode::hybrid, 7);
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.metrics.mae, b.metrics.mae);
  EXPECT_EQ(a.metrics.n, 12u);
  EXPECT_EQ(a.anchors.size(), 5u);
  EXPECT_GT(a.train_pairs, 0u);
  EXPECT_TRUE(a.model.anchor.has_value());
  EXPECT_TRUE(a.model.features.has_value());
  EXPECT_EQ(a.report.epochs.size(), 3u);
  EXPECT_LE(a.metrics.mae, a.metrics.mse);
  ASSERT_TRUE(a.metrics.ranking_accuracy.has_value());
  EXPECT_GT(*a.metrics.ranking_accuracy, 0.5);

  const auto c = run_experiment(small_spec(TrainMode::hybrid, 8));
  EXPECT_NE(a.model, c.model);
}

TEST(Experiment, RejectsBadSplit) {
  auto spec = small_spec(TrainMode::ranking_only, 1);
  spec.train_fraction = 1.0;
  EXPECT_THROW(run_experiment(spec), DomainError);
  spec.train_fraction = 0.01;
  EXPECT_THROW(run_experiment(spec), DomainError);
}

TEST(Sweep, RowsTableAndCsv) {
  const auto base = small_spec(TrainMode::hybrid, 0);
  const auto rows = sweep(SweepParameter::anchor_size, {3, 6}, base, {1, 2, 3});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_EQ(r.mae.size(), 3u);
    EXPECT_EQ(r.median_mae, median(r.mae));
    EXPECT_EQ(r.median_mse, median(r.mse));
  }
  const auto table = format_sweep_table(SweepParameter::anchor_size, rows);
  std::vector<std::string> lines;
  for (std::size_t start = 0; start < table.size();) {
    const auto end = table.find('\n', start);
    lines.push_back(table.substr(start, end - start));
    start = end + 1;
  }
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_NE(lines[0].find("anchor_size"), std::string::npos);
  EXPECT_NE(lines[0].find("MAE"), std::string::npos);
  EXPECT_EQ(lines[1].rfind("3 ", 0), 0u);

  TempDir dir;
  write_sweep_csv(dir / "s.csv", SweepParameter::anchor_size, rows);
  const auto parsed = csv::read_file(dir / "s.csv");
  EXPECT_EQ(parsed.header, (std::vector<std::string>{"anchor_size", "seeds", "mae", "mse"}));
  ASSERT_EQ(parsed.rows.size(), 2u);
  EXPECT_EQ(parsed.rows[1][0], "6");
  EXPECT_EQ(parsed.rows[1][1], "3");

  EXPECT_THROW(sweep(SweepParameter::margin, {}, base, {1}), DomainError);
  EXPECT_THROW(sweep(SweepParameter::margin, {0.5}, base, {}), DomainError);
}
