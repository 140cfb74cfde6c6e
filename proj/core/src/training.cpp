#include "rankcount/training.hpp"

#include <algorithm>
#include <cmath>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"

namespace rankcount {

namespace {

double signed_margin(double margin, MarginSign sign) {
  return sign == MarginSign::standard_plus ? margin : -margin;
}

const std::vector<double>& lookup(const FeatureTable& features, const std::string& id) {
  auto it = features.find(id);
  if (it == features.end()) throw DomainError("no features for image '" + id + "'");
  return it->second;
}

void validate(const TrainConfig& config) {
  if (!(config.margin >= 0.0)) throw DomainError("margin must be >= 0");
  if (config.filter_threshold && !(*config.filter_threshold > 1.0)) {
    throw DomainError("filter threshold xi must be > 1");
  }
  if (!(config.alpha >= 0.0)) throw DomainError("alpha must be >= 0");
  if (config.count_norm && !(*config.count_norm > 0.0)) throw DomainError("count_norm must be > 0");
  if (!(config.lr > 0.0)) throw DomainError("learning rate must be > 0");
  if (config.epochs < 1) throw DomainError("epochs must be >= 1");
}

}  // namespace

double hinge_loss(double v_hi, double v_lo, double margin, MarginSign sign) {
  return std::max(0.0, v_lo - v_hi + signed_margin(margin, sign));
}

HingeGradient hinge_subgradient(double v_hi, double v_lo, double margin, MarginSign sign) {
  if (hinge_loss(v_hi, v_lo, margin, sign) > 0.0) return {-1.0, 1.0};
  return {};
}

FilterDecision hard_filter(double v_i, double v_j, double xi) {
  const double lo = std::min(v_i, v_j);
  const double hi = std::max(v_i, v_j);
  if (lo <= 0.0) return FilterDecision::keep;
  return hi / lo >= xi ? FilterDecision::abandon : FilterDecision::keep;
}

double regression_loss(double v, double count, double count_norm) {
  const double r = v - count / count_norm;
  return r * r;
}

double regression_gradient(double v, double count, double count_norm) {
  return 2.0 * (v - count / count_norm);
}

double default_count_norm(const CountMap& regression_set, double margin) {
  double max_count = 0.0;
  double min_positive = 0.0;
  for (const auto& [id, c] : regression_set) {
    const auto y = static_cast<double>(c);
    max_count = std::max(max_count, y);
    if (y > 0.0 && (min_positive == 0.0 || y < min_positive)) min_positive = y;
  }
  if (max_count <= 0.0) return 1.0;
  if (margin > 0.0) return std::min(max_count, min_positive / margin);
  return max_count;
}

double training_rank_accuracy(const PotentialModel& model, const FeatureTable& features,
                              const std::vector<RankingPair>& pairs) {
  if (pairs.empty()) return 0.0;
  std::map<std::string, double> potentials;
  std::size_t correct = 0;
  auto potential = [&](const std::string& id) {
    auto it = potentials.find(id);
    if (it == potentials.end()) it = potentials.emplace(id, forward(model, lookup(features, id))).first;
    return it->second;
  };
  for (const auto& p : pairs)
    if (potential(p.hi) > potential(p.lo)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::pair<PotentialModel, TrainReport> train(const FeatureTable& features,
                                             const std::vector<RankingPair>& pairs,
                                             const CountMap& regression_set, const TrainConfig& config,
                                             PotentialModel model) {
  validate(config);
  if (pairs.empty()) throw DomainError("empty ranking pair set");

  struct ResolvedPair {
    const std::vector<double>* hi;
    const std::vector<double>* lo;
  };
  std::vector<ResolvedPair> resolved;
  resolved.reserve(pairs.size());
  for (const auto& p : pairs) resolved.push_back({&lookup(features, p.hi), &lookup(features, p.lo)});

  struct RegressionItem {
    const std::vector<double>* x;
    double count;
  };
  std::vector<RegressionItem> reg_items;
  const bool hybrid = config.alpha > 0.0 && !regression_set.empty();
  double count_norm = 1.0;
  if (hybrid) {
    for (const auto& [id, c] : regression_set) {
      reg_items.push_back({&lookup(features, id), static_cast<double>(c)});
    }
    count_norm = config.count_norm.value_or(default_count_norm(regression_set, config.margin));
  }

  Rng rng(config.seed);
  AdamState adam(model.parameter_count());
  std::vector<double> grad(model.parameter_count(), 0.0);
  TrainReport report;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochStats stats;
    stats.epoch = epoch;
    double rank_sum = 0.0;
    double reg_sum = 0.0;
    std::size_t reg_seen = 0;
    for (std::size_t it = 0; it < resolved.size(); ++it) {
      const auto& pair = resolved[static_cast<std::size_t>(rng.index(resolved.size()))];
      bool active = false;

      const ForwardTrace hi = forward_trace(model, *pair.hi);
      const ForwardTrace lo = forward_trace(model, *pair.lo);
      const double v_hi = hi.potential();
      const double v_lo = lo.potential();
      ++stats.pairs_seen;
      rank_sum += hinge_loss(v_hi, v_lo, config.margin, config.margin_sign);
      if (config.filter_threshold && hard_filter(v_hi, v_lo, *config.filter_threshold) == FilterDecision::abandon) {
        ++stats.abandoned;
      } else {
        const auto g = hinge_subgradient(v_hi, v_lo, config.margin, config.margin_sign);
        if (g.d_hi != 0.0 || g.d_lo != 0.0) {
          if (!active) std::fill(grad.begin(), grad.end(), 0.0);
          accumulate_backward(model, hi, g.d_hi, grad);
          accumulate_backward(model, lo, g.d_lo, grad);
          active = true;
        }
      }

      if (hybrid) {
        const auto& item = reg_items[static_cast<std::size_t>(rng.index(reg_items.size()))];
        const ForwardTrace tr = forward_trace(model, *item.x);
        const double v = tr.potential();
        reg_sum += regression_loss(v, item.count, count_norm);
        ++reg_seen;
        const double upstream = config.alpha * regression_gradient(v, item.count, count_norm);
        if (upstream != 0.0) {
          if (!active) std::fill(grad.begin(), grad.end(), 0.0);
          accumulate_backward(model, tr, upstream, grad);
          active = true;
        }
      }

      if (active) {
        adam_step(model.parameters(), grad, adam, config.lr);
        ++report.optimizer_steps;
      }
    }
    stats.rank_loss = rank_sum / static_cast<double>(stats.pairs_seen);
    stats.reg_loss = reg_seen > 0 ? reg_sum / static_cast<double>(reg_seen) : 0.0;
    stats.rank_acc = training_rank_accuracy(model, features, pairs);
    report.epochs.push_back(stats);
  }
  return {std::move(model), std::move(report)};
}

PotentialModel prepare_model(const FeatureTable& features, const std::vector<std::size_t>& hidden,
                             std::uint64_t seed) {
  if (features.empty()) throw DomainError("no training features");
  std::vector<std::vector<double>> vectors;
  vectors.reserve(features.size());
  for (const auto& [id, v] : features) vectors.push_back(v);
  std::vector<std::size_t> dims{vectors.front().size()};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  auto model = PotentialModel::initialize(dims, seed);
  if (vectors.size() >= 2) model.set_norm_stats(fit_normalization(vectors));
  return model;
}

void write_train_report(const std::filesystem::path& path, const TrainReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : report.epochs) {
    rows.push_back({std::to_string(e.epoch), csv::format_double(e.rank_loss), csv::format_double(e.reg_loss),
                    std::to_string(e.abandoned), csv::format_double(e.rank_acc)});
  }
  csv::write_file(path, {"epoch", "rank_loss", "reg_loss", "abandoned", "rank_acc"}, rows);
}

}  // namespace rankcount
