#include "rankcount/experiment.hpp"

#include <algorithm>
#include <cstdio>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::ranking_only:
      return "ranking_only";
    case TrainMode::hybrid:
      return "hybrid";
    case TrainMode::fully:
      return "fully";
  }
  return "?";
}

TrainMode parse_train_mode(std::string_view text) {
  if (text == "ranking_only") return TrainMode::ranking_only;
  if (text == "hybrid") return TrainMode::hybrid;
  if (text == "fully") return TrainMode::fully;
  throw DomainError("unknown mode '" + std::string(text) + "' (expected ranking_only, hybrid or fully)");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::margin:
      return "margin";
    case SweepParameter::anchor_size:
      return "anchor_size";
    case SweepParameter::ratio:
      return "ratio";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  if (text == "margin") return SweepParameter::margin;
  if (text == "anchor_size") return SweepParameter::anchor_size;
  if (text == "ratio") return SweepParameter::ratio;
  throw DomainError("unknown sweep parameter '" + std::string(text) + "' (expected margin, anchor_size or ratio)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stage + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrainConfig effective_train_config(const ExperimentSpec& spec) {
  TrainConfig cfg = spec.train;
  if (spec.mode == TrainMode::ranking_only) cfg.alpha = 0.0;
  return cfg;
}

CountMap regression_set_for(TrainMode mode, const AnchorSet& anchors, const CountMap& training_counts) {
  switch (mode) {
    case TrainMode::ranking_only:
      return {};
    case TrainMode::hybrid:
      return anchors.counts();
    case TrainMode::fully:
      return training_counts;
  }
  return {};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw DomainError("train fraction must lie in (0, 1)");
  }
  SyntheticConfig data = spec.data;
  data.seed = derive_seed(spec.seed, 0);
  const auto samples = generate_synthetic(data);
  const auto n_train = static_cast<std::size_t>(static_cast<double>(samples.size()) * spec.train_fraction);
  if (n_train < 2 || n_train >= samples.size()) throw DomainError("split leaves too few train or test images");

  FeatureTable train_features;
  FeatureTable test_features;
  CountMap train_counts;
  CountMap test_counts;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    auto f = extract_features(samples[k].pixels(), spec.features);
    if (k < n_train) {
      train_features.emplace(samples[k].id, std::move(f));
      train_counts[samples[k].id] = *samples[k].count;
    } else {
      test_features.emplace(samples[k].id, std::move(f));
      test_counts[samples[k].id] = *samples[k].count;
    }
  }

  ExperimentResult result;
  const auto pairs = autolabel_pairs(train_counts, spec.ratio, spec.max_pairs, derive_seed(spec.seed, 1));
  result.train_pairs = pairs.size();
  result.anchors = select_anchors(train_counts, spec.anchors, derive_seed(spec.seed, 2));

  auto init = prepare_model(train_features, spec.hidden, derive_seed(spec.seed, 3));
  TrainConfig cfg = effective_train_config(spec);
  cfg.seed = derive_seed(spec.seed, 4);
  const auto regression = regression_set_for(spec.mode, result.anchors, train_counts);
  auto [network, report] = train(train_features, pairs, regression, cfg, std::move(init));
  result.report = std::move(report);

  std::vector<AnchorPoint> points;
  for (const auto& a : result.anchors.entries) {
    points.push_back({forward(network, train_features.at(a.id)), static_cast<double>(a.count)});
  }
  result.model.network = std::move(network);
  result.model.features = spec.features;
  result.model.anchor = fit_anchor_map(points);

  std::vector<double> preds;
  std::vector<double> gts;
  for (const auto& [id, count] : test_counts) {
    preds.push_back(infer_count(*result.model.anchor, forward(result.model.network, test_features.at(id))));
    gts.push_back(static_cast<double>(count));
  }
  result.metrics.n = preds.size();
  result.metrics.mae = mae(preds, gts);
  result.metrics.mse = mse(preds, gts);
  result.metrics.per_range = per_range_report(preds, gts, spec.range_edges, spec.delta);
  double sum = 0.0;
  for (double g : gts) sum += g;
  result.mean_test_count = sum / static_cast<double>(gts.size());

  const auto test_pairs = autolabel_pairs(test_counts, spec.eval_ratio, kUnlimitedPairs, 0);
  result.test_pairs = test_pairs.size();
  if (!test_pairs.empty()) {
    const auto& net = result.model.network;
    result.metrics.ranking_accuracy = ranking_accuracy(
        [&](const std::string& id) { return forward(net, test_features.at(id)); }, test_pairs);
  }
  return result;
}

ExperimentSpec with_parameter(ExperimentSpec spec, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::margin:
      spec.train.margin = value;
      break;
    case SweepParameter::anchor_size:
      if (!(value >= 2.0) || value != static_cast<double>(static_cast<std::size_t>(value))) {
        throw DomainError("anchor size must be an integer >= 2");
      }
      spec.anchors = static_cast<std::size_t>(value);
      break;
    case SweepParameter::ratio:
      spec.ratio = value;
      break;
  }
  return spec;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<SweepRow> sweep(SweepParameter p, const std::vector<double>& values, const ExperimentSpec& base,
                            const std::vector<std::uint64_t>& seeds) {
  if (values.empty()) throw DomainError("sweep needs at least one value");
  if (seeds.empty()) throw DomainError("sweep needs at least one seed");
  std::vector<SweepRow> rows;
  for (double value : values) {
    SweepRow row;
    row.value = value;
    for (std::uint64_t seed : seeds) {
      auto spec = with_parameter(base, p, value);
      spec.seed = seed;
      const auto result = run_experiment(spec);
      row.mae.push_back(result.metrics.mae);
      row.mse.push_back(result.metrics.mse);
    }
    row.median_mae = median(row.mae);
    row.median_mse = median(row.mse);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, SweepParameter p, const std::vector<SweepRow>& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({csv::format_double(r.value), std::to_string(r.mae.size()), csv::format_double(r.median_mae),
                   csv::format_double(r.median_mse)});
  }
  csv::write_file(path, {std::string(to_string(p)), "seeds", "mae", "mse"}, out);
}

std::string format_sweep_table(SweepParameter p, const std::vector<SweepRow>& rows) {
  char line[128];
  std::string out;
  std::snprintf(line, sizeof(line), "%-12s %10s %10s\n", std::string(to_string(p)).c_str(), "MAE", "MSE");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-12g %10.2f %10.2f\n", r.value, r.median_mae, r.median_mse);
    out += line;
  }
  return out;
}

}  // namespace rankcount
