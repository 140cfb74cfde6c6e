#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "rankcount/anchor.hpp"
#include "rankcount/eval.hpp"
#include "rankcount/features.hpp"
#include "rankcount/model_file.hpp"
#include "rankcount/synthdata.hpp"
#include "rankcount/training.hpp"

namespace rankcount {

/// Which supervision the regression term sees.
///   ranking_only: pairs only (alpha forced to 0).
///   hybrid:       pairs plus the anchor set as regression data.
///   fully:        pairs plus every training count.
enum class TrainMode { ranking_only, hybrid, fully };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view text);

inline const std::vector<double> kDefaultRangeEdges{0.0, 500.0, 1000.0, 2000.0,
                                                    std::numeric_limits<double>::infinity()};

/// A complete synthetic experiment: generate, split, label, train, anchor,
/// evaluate.
struct ExperimentSpec {
  SyntheticConfig data;
  double train_fraction = 0.8;
  double ratio = 2.0;
  std::size_t max_pairs = kUnlimitedPairs;
  // Ratio used to label held-out pairs for ranking accuracy.
  double eval_ratio = 2.0;
  std::size_t anchors = 10;
  TrainMode mode = TrainMode::ranking_only;
  TrainConfig train;
  FeatureConfig features;
  std::vector<std::size_t> hidden;
  std::vector<double> range_edges = kDefaultRangeEdges;
  double delta = 0.2;
  std::uint64_t seed = 0;
};

/// Sub-seed for stage `stage` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage);

/// Applies the mode's rules to the training config: alpha is forced to 0 for
/// ranking_only.
TrainConfig effective_train_config(const ExperimentSpec& spec);

/// The regression set D implied by the mode.
CountMap regression_set_for(TrainMode mode, const AnchorSet& anchors, const CountMap& training_counts);

struct ExperimentResult {
  CountingModel model;
  TrainReport report;
  MetricsReport metrics;
  AnchorSet anchors;
  std::size_t train_pairs = 0;
  std::size_t test_pairs = 0;
  double mean_test_count = 0.0;
};

/// Runs the whole pipeline in memory. Deterministic in spec.seed.
ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class SweepParameter { margin, anchor_size, ratio };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

/// Applies one sweep value to a copy of the spec.
ExperimentSpec with_parameter(ExperimentSpec spec, SweepParameter p, double value);

struct SweepRow {
  double value = 0.0;
  std::vector<double> mae;  // one per seed
  std::vector<double> mse;
  double median_mae = 0.0;
  double median_mse = 0.0;
};

/// Runs the experiment for every (value, seed) in order.
std::vector<SweepRow> sweep(SweepParameter p, const std::vector<double>& values, const ExperimentSpec& base,
                            const std::vector<std::uint64_t>& seeds);

double median(std::vector<double> values);

/// `value,seeds,mae,mse` with medians over seeds.
void write_sweep_csv(const std::filesystem::path& path, SweepParameter p, const std::vector<SweepRow>& rows);
std::string format_sweep_table(SweepParameter p, const std::vector<SweepRow>& rows);

}  // namespace rankcount
