#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rankcount/image.hpp"
#include "rankcount/rankgraph.hpp"

namespace rankcount {

/// Ground-truth counts keyed by image id. std::map keeps iteration order
/// lexicographic, which every seeded routine below relies on.
using CountMap = std::map<std::string, std::int64_t>;

/// An image given either as pixels or as a precomputed feature vector.
struct ImageSample {
  std::string id;
  std::variant<GrayImage, std::vector<double>> content;
  std::optional<std::int64_t> count;

  bool has_pixels() const { return std::holds_alternative<GrayImage>(content); }
  const GrayImage& pixels() const { return std::get<GrayImage>(content); }
  const std::vector<double>& features() const { return std::get<std::vector<double>>(content); }
};

struct SyntheticConfig {
  std::size_t n = 200;
  std::int64_t count_min = 10;
  std::int64_t count_max = 500;
  int width = 256;
  int height = 256;
  std::uint64_t seed = 0;
};

struct Blob {
  double x = 0.0;
  double y = 0.0;
  double peak = 0.0;   // fraction of full scale, [0.4, 1.0]
  double sigma = 0.0;  // pixels, [1.5, 3.0]
};

struct SyntheticScene {
  std::string id;
  GrayImage image;
  std::vector<Blob> blobs;
};

/// Renders every scene with its blob list. Deterministic in config.seed.
/// Throws DomainError on an invalid configuration.
std::vector<SyntheticScene> generate_scenes(const SyntheticConfig& config);

/// Same images as generate_scenes, with count = number of blobs.
std::vector<ImageSample> generate_synthetic(const SyntheticConfig& config);

inline constexpr std::size_t kUnlimitedPairs = std::numeric_limits<std::size_t>::max();

/// Default pair budget when a cap is requested without a value.
inline constexpr std::size_t kDefaultPairBudget = 48000;

/// True when a glance would rank `a` above `b`: a > b and a >= ratio * b.
bool qualifies(std::int64_t a, std::int64_t b, double ratio);

/// All qualifying pairs, or a seeded uniform subset of size max_pairs when
/// more qualify. Sorted by (hi, lo). Throws DomainError when ratio < 1 or
/// counts is empty.
std::vector<RankingPair> autolabel_pairs(const CountMap& counts, double ratio,
                                         std::size_t max_pairs, std::uint64_t seed);

/// Greedy matching over a seeded shuffle: every id appears in at most one
/// pair. Sorted by (hi, lo).
std::vector<RankingPair> sparse_pairs(const CountMap& counts, double ratio, std::uint64_t seed);

struct SparsityReport {
  std::map<std::string, std::size_t> zeta_per_image;
  // Empty when no image carries a label.
  std::optional<double> zeta_mean;
};

SparsityReport sparsity_report(const std::vector<RankingPair>& pairs);

// --- files -----------------------------------------------------------------

CountMap read_count_file(const std::filesystem::path& path);
void write_count_file(const std::filesystem::path& path, const CountMap& counts);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory on read
  std::optional<std::int64_t> count;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

CountMap counts_of(const std::vector<ManifestEntry>& entries);
CountMap counts_of(const std::vector<ImageSample>& samples);

/// Writes <dir>/<id>.pgm for each pixel sample plus manifest.csv and
/// counts.csv. Creates dir if needed.
void write_dataset(const std::filesystem::path& dir, const std::vector<ImageSample>& samples);

/// Loads every manifest image as a pixel sample.
std::vector<ImageSample> load_dataset(const std::filesystem::path& manifest);

}  // namespace rankcount
