#include "rankcount/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

namespace {

void check_lengths(std::span<const double> preds, std::span<const double> gts) {
  if (preds.size() != gts.size()) throw DomainError("prediction and ground-truth lengths differ");
  if (preds.empty()) throw DomainError("no samples to evaluate");
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return csv::format_double(v);
}

std::string fixed(double v, int precision) {
  if (std::isnan(v)) return "-";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

double mae(std::span<const double> preds, std::span<const double> gts) {
  check_lengths(preds, gts);
  double sum = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) sum += std::abs(preds[k] - gts[k]);
  return sum / static_cast<double>(preds.size());
}

double mse(std::span<const double> preds, std::span<const double> gts) {
  check_lengths(preds, gts);
  double sum = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double d = preds[k] - gts[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(preds.size()));
}

double ranking_accuracy(const PotentialFn& potential, const std::vector<RankingPair>& pairs) {
  if (pairs.empty()) throw DomainError("no pairs to evaluate");
  std::map<std::string, double> cache;
  auto get = [&](const std::string& id) {
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, potential(id)).first;
    return it->second;
  };
  std::size_t correct = 0;
  for (const auto& p : pairs)
    if (get(p.hi) > get(p.lo)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::vector<RangeRow> per_range_report(std::span<const double> preds, std::span<const double> gts,
                                       std::span<const double> edges, double delta) {
  if (preds.size() != gts.size()) throw DomainError("prediction and ground-truth lengths differ");
  if (!(delta > 0.0)) throw DomainError("delta must be > 0");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw DomainError("range edges must be strictly ascending");
  std::vector<RangeRow> rows;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    RangeRow row;
    row.lo = edges[k];
    row.hi = edges[k + 1];
    std::size_t accurate = 0;
    double abs_sum = 0.0;
    for (std::size_t s = 0; s < gts.size(); ++s) {
      if (gts[s] < row.lo || gts[s] >= row.hi) continue;
      ++row.n;
      const double err = std::abs(preds[s] - gts[s]);
      abs_sum += err;
      if (err <= delta * gts[s]) ++accurate;
    }
    if (row.n > 0) {
      row.accuracy = static_cast<double>(accurate) / static_cast<double>(row.n);
      row.mae = abs_sum / static_cast<double>(row.n);
    } else {
      row.accuracy = row.mae = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"all", "", "", std::to_string(report.n), num(report.mae), num(report.mse), "",
                  report.ranking_accuracy ? num(*report.ranking_accuracy) : std::string()});
  for (const auto& r : report.per_range) {
    rows.push_back({"range", num(r.lo), num(r.hi), std::to_string(r.n), num(r.mae), "", num(r.accuracy), ""});
  }
  csv::write_file(path, {"scope", "lo", "hi", "n", "mae", "mse", "accuracy", "ranking_accuracy"}, rows);
}

std::string format_metrics_table(const MetricsReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %10s\n", "samples", std::to_string(report.n).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %10s\n", "MAE", fixed(report.mae, 3).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %10s\n", "MSE", fixed(report.mse, 3).c_str());
  out += line;
  if (report.ranking_accuracy) {
    std::snprintf(line, sizeof(line), "%-12s %10s\n", "rank acc", fixed(*report.ranking_accuracy, 4).c_str());
    out += line;
  }
  if (!report.per_range.empty()) {
    std::snprintf(line, sizeof(line), "\n%-21s %6s %10s %10s\n", "range", "n", "accuracy", "MAE");
    out += line;
    for (const auto& r : report.per_range) {
      const std::string range = "[" + fixed(r.lo, 0) + ", " + fixed(r.hi, 0) + ")";
      std::snprintf(line, sizeof(line), "%-21s %6zu %10s %10s\n", range.c_str(), r.n, fixed(r.accuracy, 4).c_str(),
                    fixed(r.mae, 3).c_str());
      out += line;
    }
  }
  return out;
}

}  // namespace rankcount
