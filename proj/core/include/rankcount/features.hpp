#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rankcount/image.hpp"

namespace rankcount {

/// Grid of g x g cells; each cell contributes four features.
struct FeatureConfig {
  int grid = 2;
  int localmax_threshold = 60;

  std::size_t feature_dim() const { return 4 * static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid); }
  bool operator==(const FeatureConfig&) const = default;
};

/// Per cell, in row-major cell order: mean intensity, intensity variance,
/// edge energy (sum of absolute horizontal and vertical differences between
/// pixels of the same cell), and the number of strict 8-neighbour local
/// maxima with intensity >= localmax_threshold.
///
/// Throws DomainError when the image is smaller than the grid.
std::vector<double> extract_features(const GrayImage& image, const FeatureConfig& config);

/// Per-dimension standardization statistics. Every std entry is >= 1e-8.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t dim() const { return mean.size(); }
  bool operator==(const NormStats&) const = default;
};

inline constexpr double kMinStd = 1e-8;

/// Population mean and standard deviation per dimension. Needs at least two
/// vectors of equal length.
NormStats fit_normalization(std::span<const std::vector<double>> vectors);

std::vector<double> apply_normalization(std::span<const double> v, const NormStats& stats);

/// Identity statistics (mean 0, std 1) for models trained on raw inputs.
NormStats identity_normalization(std::size_t dim);

struct FeatureRow {
  std::string id;
  std::vector<double> values;
};

/// CSV `id,f0,f1,...`. Errors name the offending line.
std::vector<FeatureRow> load_feature_file(const std::filesystem::path& path);
void write_feature_file(const std::filesystem::path& path, const std::vector<FeatureRow>& rows);

}  // namespace rankcount
