#include "rankcount/anchor.hpp"

#include <algorithm>
#include <cmath>

#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"

namespace rankcount {

CountMap AnchorSet::counts() const {
  CountMap out;
  for (const auto& e : entries) out[e.id] = e.count;
  return out;
}

AnchorSet select_anchors(const CountMap& counts, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DomainError("anchor set needs at least 2 images");
  if (k > counts.size()) {
    throw DomainError("anchor set size " + std::to_string(k) + " exceeds population " +
                      std::to_string(counts.size()));
  }
  std::vector<AnchorEntry> sorted;
  sorted.reserve(counts.size());
  for (const auto& [id, c] : counts) sorted.push_back({id, c});
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AnchorEntry& a, const AnchorEntry& b) { return a.count < b.count; });

  Rng rng(seed);
  AnchorSet set;
  const std::size_t n = sorted.size();
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t lo = s * n / k;
    const std::size_t hi = (s + 1) * n / k;
    set.entries.push_back(sorted[lo + static_cast<std::size_t>(rng.index(hi - lo))]);
  }
  return set;
}

AnchorMap fit_anchor_map(std::span<const AnchorPoint> anchors) {
  if (anchors.size() < 2) throw DomainError("anchor fit needs at least 2 anchors");
  double mean_v = 0.0;
  double mean_y = 0.0;
  for (const auto& a : anchors) {
    mean_v += a.potential;
    mean_y += a.count;
  }
  const double n = static_cast<double>(anchors.size());
  mean_v /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& a : anchors) {
    const double dv = a.potential - mean_v;
    sxx += dv * dv;
    sxy += dv * (a.count - mean_y);
  }
  const bool distinct = std::any_of(anchors.begin(), anchors.end(), [&](const AnchorPoint& a) {
    return a.potential != anchors.front().potential;
  });
  if (!distinct || !(sxx > 0.0)) throw DomainError("degenerate anchor set: all potentials are equal");
  AnchorMap map;
  map.slope = sxy / sxx;
  map.intercept = mean_y - map.slope * mean_v;
  if (!std::isfinite(map.slope) || !std::isfinite(map.intercept)) {
    throw DomainError("anchor fit produced a non-finite map");
  }
  return map;
}

double infer_count(const AnchorMap& map, double potential) { return std::max(0.0, map.apply(potential)); }

AnchorSet read_anchor_file(const std::filesystem::path& path) {
  AnchorSet set;
  for (const auto& [id, c] : read_count_file(path)) set.entries.push_back({id, c});
  std::stable_sort(set.entries.begin(), set.entries.end(),
                   [](const AnchorEntry& a, const AnchorEntry& b) { return a.count < b.count; });
  return set;
}

void write_anchor_file(const std::filesystem::path& path, const AnchorSet& anchors) {
  write_count_file(path, anchors.counts());
}

}  // namespace rankcount
