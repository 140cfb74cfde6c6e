#include "rankcount/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"

namespace rankcount {

namespace {

constexpr double kBackgroundLevel = 10.0;
constexpr double kBackgroundNoise = 2.5;

std::string make_id(std::size_t index, std::size_t n) {
  std::size_t digits = 1;
  for (std::size_t v = n > 0 ? n - 1 : 0; v >= 10; v /= 10) ++digits;
  digits = std::max<std::size_t>(digits, 4);
  std::string num = std::to_string(index);
  return "img" + std::string(digits - num.size(), '0') + num;
}

void sort_pairs(std::vector<RankingPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const RankingPair& a, const RankingPair& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  });
}

}  // namespace

std::vector<SyntheticScene> generate_scenes(const SyntheticConfig& config) {
  if (config.n < 1) throw DomainError("n must be at least 1");
  if (config.count_min < 1 || config.count_min > config.count_max) {
    throw DomainError("invalid count range [" + std::to_string(config.count_min) + ", " +
                      std::to_string(config.count_max) + "]");
  }
  if (config.width < 16 || config.height < 16) throw DomainError("images must be at least 16x16");

  Rng rng(config.seed);
  const double log_lo = std::log(static_cast<double>(config.count_min) - 0.5);
  const double log_hi = std::log(static_cast<double>(config.count_max) + 0.5);
  const int w = config.width;
  const int h = config.height;

  std::vector<SyntheticScene> scenes;
  scenes.reserve(config.n);
  std::vector<double> canvas(static_cast<std::size_t>(w) * h);
  for (std::size_t k = 0; k < config.n; ++k) {
    const auto count = std::clamp<std::int64_t>(std::llround(std::exp(rng.uniform(log_lo, log_hi))),
                                                config.count_min, config.count_max);
    for (auto& px : canvas) px = kBackgroundLevel + kBackgroundNoise * rng.normal();

    SyntheticScene scene;
    scene.id = make_id(k, config.n);
    scene.blobs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t b = 0; b < count; ++b) {
      Blob blob;
      blob.x = rng.uniform(0.0, w);
      blob.y = rng.uniform(0.0, h);
      blob.peak = rng.uniform(0.4, 1.0);
      blob.sigma = rng.uniform(1.5, 3.0);
      scene.blobs.push_back(blob);

      const double reach = 4.0 * blob.sigma;
      const int x0 = std::max(0, static_cast<int>(std::floor(blob.x - reach)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(blob.x + reach)));
      const int y0 = std::max(0, static_cast<int>(std::floor(blob.y - reach)));
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(blob.y + reach)));
      const double inv = 1.0 / (2.0 * blob.sigma * blob.sigma);
      const double amp = 255.0 * blob.peak;
      for (int y = y0; y <= y1; ++y) {
        // Pixel centers sit at integer + 0.5.
        const double dy = y + 0.5 - blob.y;
        for (int x = x0; x <= x1; ++x) {
          const double dx = x + 0.5 - blob.x;
          canvas[static_cast<std::size_t>(y) * w + x] += amp * std::exp(-(dx * dx + dy * dy) * inv);
        }
      }
    }

    scene.image = GrayImage(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double v = std::clamp(canvas[static_cast<std::size_t>(y) * w + x], 0.0, 255.0);
        scene.image.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
      }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<ImageSample> generate_synthetic(const SyntheticConfig& config) {
  auto scenes = generate_scenes(config);
  std::vector<ImageSample> out;
  out.reserve(scenes.size());
  for (auto& s : scenes) {
    const auto count = static_cast<std::int64_t>(s.blobs.size());
    out.push_back({std::move(s.id), std::move(s.image), count});
  }
  return out;
}

bool qualifies(std::int64_t a, std::int64_t b, double ratio) {
  return a > b && static_cast<double>(a) >= ratio * static_cast<double>(b);
}

std::vector<RankingPair> autolabel_pairs(const CountMap& counts, double ratio, std::size_t max_pairs,
                                         std::uint64_t seed) {
  if (!(ratio >= 1.0)) throw DomainError("ratio must be >= 1");
  if (counts.empty()) throw DomainError("no counts to label");
  std::vector<RankingPair> pairs;
  for (const auto& [hi, hc] : counts)
    for (const auto& [lo, lc] : counts)
      if (qualifies(hc, lc, ratio)) pairs.push_back({hi, lo, Provenance::manual});

  if (pairs.size() > max_pairs) {
    // Partial Fisher-Yates picks a uniform subset.
    Rng rng(seed);
    for (std::size_t k = 0; k < max_pairs; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.index(pairs.size() - k));
      std::swap(pairs[k], pairs[pick]);
    }
    pairs.resize(max_pairs);
    sort_pairs(pairs);
  }
  return pairs;
}

std::vector<RankingPair> sparse_pairs(const CountMap& counts, double ratio, std::uint64_t seed) {
  if (!(ratio >= 1.0)) throw DomainError("ratio must be >= 1");
  std::vector<std::pair<std::string, std::int64_t>> order(counts.begin(), counts.end());
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<bool> used(order.size(), false);
  std::vector<RankingPair> pairs;
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (used[a]) continue;
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (used[b]) continue;
      const auto& [id_a, ca] = order[a];
      const auto& [id_b, cb] = order[b];
      if (qualifies(ca, cb, ratio)) {
        pairs.push_back({id_a, id_b, Provenance::manual});
      } else if (qualifies(cb, ca, ratio)) {
        pairs.push_back({id_b, id_a, Provenance::manual});
      } else {
        continue;
      }
      used[a] = used[b] = true;
      break;
    }
  }
  sort_pairs(pairs);
  return pairs;
}

SparsityReport sparsity_report(const std::vector<RankingPair>& pairs) {
  SparsityReport report;
  for (const auto& p : pairs) {
    ++report.zeta_per_image[p.hi];
    ++report.zeta_per_image[p.lo];
  }
  if (!report.zeta_per_image.empty()) {
    report.zeta_mean = 2.0 * static_cast<double>(pairs.size()) /
                       static_cast<double>(report.zeta_per_image.size());
  }
  return report;
}

CountMap read_count_file(const std::filesystem::path& path) {
  const auto table = csv::read_file(path, {"id", "count"});
  CountMap counts;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto where = path.string() + ": line " + std::to_string(table.line_numbers[r]);
    long long c = 0;
    try {
      c = csv::parse_int(table.rows[r][1]);
    } catch (const IoError& e) {
      throw IoError(where + ": " + e.what());
    }
    if (c < 0) throw IoError(where + ": negative count");
    if (!counts.emplace(table.rows[r][0], c).second) throw IoError(where + ": duplicate id '" + table.rows[r][0] + "'");
  }
  return counts;
}

void write_count_file(const std::filesystem::path& path, const CountMap& counts) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [id, c] : counts) rows.push_back({id, std::to_string(c)});
  csv::write_file(path, {"id", "count"}, rows);
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const auto table = csv::read_file(path, {"id", "path", "count"});
  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = path.string() + ": line " + std::to_string(table.line_numbers[r]);
    if (!seen.insert(row[0]).second) throw IoError(where + ": duplicate id '" + row[0] + "'");
    ManifestEntry e;
    e.id = row[0];
    e.path = std::filesystem::path(row[1]).is_absolute() ? std::filesystem::path(row[1]) : base / row[1];
    if (!row[2].empty()) {
      try {
        e.count = csv::parse_int(row[2]);
      } catch (const IoError& err) {
        throw IoError(where + ": " + err.what());
      }
      if (*e.count < 0) throw IoError(where + ": negative count");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : entries)
    rows.push_back({e.id, e.path.generic_string(), e.count ? std::to_string(*e.count) : std::string()});
  csv::write_file(path, {"id", "path", "count"}, rows);
}

CountMap counts_of(const std::vector<ManifestEntry>& entries) {
  CountMap counts;
  for (const auto& e : entries)
    if (e.count) counts[e.id] = *e.count;
  return counts;
}

CountMap counts_of(const std::vector<ImageSample>& samples) {
  CountMap counts;
  for (const auto& s : samples)
    if (s.count) counts[s.id] = *s.count;
  return counts;
}

void write_dataset(const std::filesystem::path& dir, const std::vector<ImageSample>& samples) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<ManifestEntry> entries;
  for (const auto& s : samples) {
    if (!s.has_pixels()) throw DomainError("sample '" + s.id + "' has no pixels to write");
    const std::string file = s.id + ".pgm";
    write_pgm(dir / file, s.pixels());
    entries.push_back({s.id, file, s.count});
  }
  write_manifest(dir / "manifest.csv", entries);
  write_count_file(dir / "counts.csv", counts_of(samples));
}

std::vector<ImageSample> load_dataset(const std::filesystem::path& manifest) {
  std::vector<ImageSample> samples;
  for (const auto& e : read_manifest(manifest)) samples.push_back({e.id, read_pgm(e.path), e.count});
  return samples;
}

}  // namespace rankcount
