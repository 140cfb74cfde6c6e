#include "rankcount/features.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

namespace {

bool is_strict_local_max(const GrayImage& img, int x, int y) {
  const int v = img.at(x, y);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int nx = x + dx;
      const int ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= img.width() || ny >= img.height()) continue;
      if (img.at(nx, ny) >= v) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<double> extract_features(const GrayImage& image, const FeatureConfig& config) {
  const int g = config.grid;
  if (g < 1) throw DomainError("feature grid must be >= 1");
  if (image.width() < g || image.height() < g) {
    throw DomainError("image " + std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                      " is smaller than the " + std::to_string(g) + "x" + std::to_string(g) + " grid");
  }
  std::vector<double> out;
  out.reserve(config.feature_dim());
  for (int cy = 0; cy < g; ++cy) {
    const int y0 = cy * image.height() / g;
    const int y1 = (cy + 1) * image.height() / g;
    for (int cx = 0; cx < g; ++cx) {
      const int x0 = cx * image.width() / g;
      const int x1 = (cx + 1) * image.width() / g;
      double sum = 0.0;
      double sum_sq = 0.0;
      double edge = 0.0;
      double maxima = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const int v = image.at(x, y);
          sum += v;
          sum_sq += static_cast<double>(v) * v;
          if (x + 1 < x1) edge += std::abs(image.at(x + 1, y) - v);
          if (y + 1 < y1) edge += std::abs(image.at(x, y + 1) - v);
          if (v >= config.localmax_threshold && is_strict_local_max(image, x, y)) maxima += 1.0;
        }
      }
      const double n = static_cast<double>(x1 - x0) * (y1 - y0);
      const double mean = sum / n;
      out.push_back(mean);
      out.push_back(std::max(0.0, sum_sq / n - mean * mean));
      out.push_back(edge);
      out.push_back(maxima);
    }
  }
  return out;
}

NormStats fit_normalization(std::span<const std::vector<double>> vectors) {
  if (vectors.size() < 2) throw DomainError("normalization needs at least two vectors");
  const std::size_t dim = vectors.front().size();
  NormStats stats{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (const auto& v : vectors) {
    if (v.size() != dim) throw DomainError("feature vectors differ in length");
    for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += v[d];
  }
  const double n = static_cast<double>(vectors.size());
  for (auto& m : stats.mean) m /= n;
  // Two-pass variance.
  for (const auto& v : vectors)
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = v[d] - stats.mean[d];
      stats.std[d] += c * c;
    }
  for (auto& s : stats.std) s = std::max(std::sqrt(s / n), kMinStd);
  return stats;
}

std::vector<double> apply_normalization(std::span<const double> v, const NormStats& stats) {
  if (v.size() != stats.dim()) {
    throw DomainError("feature length " + std::to_string(v.size()) + " does not match normalization dim " +
                      std::to_string(stats.dim()));
  }
  std::vector<double> out(v.size());
  for (std::size_t d = 0; d < v.size(); ++d) out[d] = (v[d] - stats.mean[d]) / stats.std[d];
  return out;
}

NormStats identity_normalization(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

std::vector<FeatureRow> load_feature_file(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  if (table.header.size() < 2 || table.header[0] != "id") {
    throw IoError(path.string() + ": expected header 'id,f0,f1,...'");
  }
  const std::size_t dim = table.header.size() - 1;
  std::vector<FeatureRow> rows;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = path.string() + ": line " + std::to_string(table.line_numbers[r]);
    if (row.size() != dim + 1) {
      throw IoError(where + ": dimension mismatch (expected " + std::to_string(dim) + " values, got " +
                    std::to_string(row.size() - 1) + ")");
    }
    if (!seen.insert(row[0]).second) throw IoError(where + ": duplicate id '" + row[0] + "'");
    FeatureRow fr{row[0], {}};
    fr.values.reserve(dim);
    for (std::size_t k = 1; k < row.size(); ++k) {
      try {
        fr.values.push_back(csv::parse_double(row[k]));
      } catch (const IoError& e) {
        throw IoError(where + ": " + e.what());
      }
    }
    rows.push_back(std::move(fr));
  }
  return rows;
}

void write_feature_file(const std::filesystem::path& path, const std::vector<FeatureRow>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().values.size();
  std::vector<std::string> header{"id"};
  for (std::size_t d = 0; d < dim; ++d) header.push_back("f" + std::to_string(d));
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.values.size() != dim) throw DomainError("feature rows differ in length");
    std::vector<std::string> fields{r.id};
    for (double v : r.values) fields.push_back(csv::format_double(v));
    out.push_back(std::move(fields));
  }
  csv::write_file(path, header, out);
}

}  // namespace rankcount
