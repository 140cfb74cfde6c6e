#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankcount/rankgraph.hpp"

namespace rankcount {

/// Mean absolute error. Throws DomainError on empty or mismatched input.
double mae(std::span<const double> preds, std::span<const double> gts);

/// Root of the mean squared error.
double mse(std::span<const double> preds, std::span<const double> gts);

using PotentialFn = std::function<double(const std::string& id)>;

/// Fraction of pairs with potential(hi) > potential(lo); ties are wrong.
/// Potentials are evaluated once per distinct id.
double ranking_accuracy(const PotentialFn& potential, const std::vector<RankingPair>& pairs);

struct RangeRow {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  // NaN for empty buckets.
  double accuracy = 0.0;
  double mae = 0.0;
};

/// Buckets samples by ground truth into [edges[k], edges[k+1]). A sample is
/// accurate when |pred - gt| <= delta * gt.
std::vector<RangeRow> per_range_report(std::span<const double> preds, std::span<const double> gts,
                                       std::span<const double> edges, double delta);

struct MetricsReport {
  double mae = 0.0;
  double mse = 0.0;
  std::size_t n = 0;
  std::optional<double> ranking_accuracy;
  std::vector<RangeRow> per_range;
};

/// `scope,lo,hi,n,mae,mse,accuracy,ranking_accuracy`: one `all` row, then one
/// `range` row per bucket.
void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& report);

std::string format_metrics_table(const MetricsReport& report);

}  // namespace rankcount
