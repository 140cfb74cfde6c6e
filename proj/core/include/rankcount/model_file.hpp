#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcount/anchor.hpp"
#include "rankcount/features.hpp"
#include "rankcount/model.hpp"
#include "rankcount/synthdata.hpp"

namespace rankcount {

inline constexpr int kModelFormatVersion = 1;

/// Everything a model file holds: the network with its normalization, the
/// feature front end used to build its inputs, and the anchor map once
/// calibrated.
struct CountingModel {
  PotentialModel network;
  // Empty when the network consumes externally computed feature vectors.
  std::optional<FeatureConfig> features;
  std::optional<AnchorMap> anchor;

  bool operator==(const CountingModel&) const = default;
};

/// JSON document; doubles are written in shortest round-trip form.
std::string serialize_model(const CountingModel& model);
CountingModel parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const CountingModel& model);
CountingModel load_model(const std::filesystem::path& path);

/// Input vector for a sample: extracted from pixels with the model's feature
/// config, or taken as-is from a feature sample.
std::vector<double> features_for(const CountingModel& model, const ImageSample& sample);

double potential_of(const CountingModel& model, const ImageSample& sample);

/// Anchored count estimate. Throws DomainError when the model is not
/// calibrated.
double infer_count(const CountingModel& model, const ImageSample& sample);

}  // namespace rankcount
