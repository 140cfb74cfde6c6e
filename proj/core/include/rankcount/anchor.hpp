#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rankcount/synthdata.hpp"

namespace rankcount {

/// Linear map from potential to count: y = slope * v + intercept.
struct AnchorMap {
  double slope = 1.0;
  double intercept = 0.0;

  double apply(double potential) const { return slope * potential + intercept; }
  bool operator==(const AnchorMap&) const = default;
};

struct AnchorEntry {
  std::string id;
  std::int64_t count = 0;

  bool operator==(const AnchorEntry&) const = default;
};

/// Images with annotated counts, ordered by ascending count.
struct AnchorSet {
  std::vector<AnchorEntry> entries;

  std::size_t size() const { return entries.size(); }
  CountMap counts() const;
};

/// Sorts by (count, id), splits into k equal-frequency strata and draws one
/// image uniformly from each. Throws DomainError unless 2 <= k <= |counts|.
AnchorSet select_anchors(const CountMap& counts, std::size_t k, std::uint64_t seed);

struct AnchorPoint {
  double potential = 0.0;
  double count = 0.0;
};

/// Ordinary least squares of count on potential. Throws DomainError with
/// fewer than two points or when all potentials are equal.
AnchorMap fit_anchor_map(std::span<const AnchorPoint> anchors);

/// max(0, slope * v + intercept).
double infer_count(const AnchorMap& map, double potential);

AnchorSet read_anchor_file(const std::filesystem::path& path);
void write_anchor_file(const std::filesystem::path& path, const AnchorSet& anchors);

}  // namespace rankcount
