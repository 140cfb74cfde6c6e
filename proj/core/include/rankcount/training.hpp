#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankcount/model.hpp"
#include "rankcount/rankgraph.hpp"
#include "rankcount/synthdata.hpp"

namespace rankcount {

/// Where the margin enters the pairwise hinge.
///   standard_plus:       max(0, v_lo - v_hi + M)
///   paper_literal_minus: max(0, v_lo - v_hi - M)
enum class MarginSign { standard_plus, paper_literal_minus };

struct TrainConfig {
  double margin = 0.5;
  MarginSign margin_sign = MarginSign::standard_plus;
  // Hard sample filter threshold xi (> 1); disabled when empty.
  std::optional<double> filter_threshold;
  double alpha = 1.0;
  // Regression target scale; see default_count_norm.
  std::optional<double> count_norm;
  double lr = 5e-5;
  int epochs = 20;
  std::uint64_t seed = 0;
};

struct EpochStats {
  int epoch = 0;
  double rank_loss = 0.0;
  double reg_loss = 0.0;
  std::size_t abandoned = 0;
  std::size_t pairs_seen = 0;
  double rank_acc = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t optimizer_steps = 0;
};

double hinge_loss(double v_hi, double v_lo, double margin, MarginSign sign);

/// Subgradient of hinge_loss with respect to (v_hi, v_lo): (-1, +1) while the
/// loss is positive, (0, 0) otherwise.
struct HingeGradient {
  double d_hi = 0.0;
  double d_lo = 0.0;
};
HingeGradient hinge_subgradient(double v_hi, double v_lo, double margin, MarginSign sign);

enum class FilterDecision { keep, abandon };

/// Abandons a pair whose potential ratio max/min is >= xi. Pairs with a
/// non-positive potential are always kept since the ratio is undefined.
FilterDecision hard_filter(double v_i, double v_j, double xi);

/// Scale used when TrainConfig::count_norm is unset: min(max_count,
/// min_positive_count / margin), or max_count when the margin is 0. With it
/// a linear potential y / count_norm already separates every pair (y, 2y)
/// drawn from the regression set's range by at least the margin, so the two
/// loss terms do not pull against each other.
double default_count_norm(const CountMap& regression_set, double margin);

/// (v - y / count_norm)^2.
double regression_loss(double v, double count, double count_norm);
double regression_gradient(double v, double count, double count_norm);

/// Raw feature vectors keyed by image id.
using FeatureTable = std::map<std::string, std::vector<double>>;

/// Siamese training with mini-batch size 1. Each iteration draws one pair
/// uniformly (with replacement) from `pairs` and, when alpha > 0 and
/// `regression_set` is non-empty, one image from the regression set. Both
/// branches of a pair go through the same parameters. The optimizer steps on
/// the summed gradient; iterations whose gradient is identically zero leave
/// the parameters (and optimizer state) untouched.
///
/// One epoch is |pairs| iterations. Throws DomainError on an empty pair set,
/// an id without features, or an invalid configuration.
std::pair<PotentialModel, TrainReport> train(const FeatureTable& features,
                                             const std::vector<RankingPair>& pairs,
                                             const CountMap& regression_set, const TrainConfig& config,
                                             PotentialModel model);

/// Fraction of pairs whose hi image gets a strictly larger potential.
double training_rank_accuracy(const PotentialModel& model, const FeatureTable& features,
                              const std::vector<RankingPair>& pairs);

/// Fits normalization on every vector in `features` and initializes a
/// network of the given hidden widths.
PotentialModel prepare_model(const FeatureTable& features, const std::vector<std::size_t>& hidden,
                             std::uint64_t seed);

/// `epoch,rank_loss,reg_loss,abandoned,rank_acc`.
void write_train_report(const std::filesystem::path& path, const TrainReport& report);

}  // namespace rankcount
