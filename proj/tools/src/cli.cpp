#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankcount/anchor.hpp"
#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/eval.hpp"
#include "rankcount/experiment.hpp"
#include "rankcount/features.hpp"
#include "rankcount/image.hpp"
#include "rankcount/model_file.hpp"
#include "rankcount/rankgraph.hpp"
#include "rankcount/synthdata.hpp"
#include "rankcount/training.hpp"
#include "service.hpp"

namespace rankcount::tools {

namespace fs = std::filesystem;

namespace {

// Seed stages shared with run_experiment so a CLI pipeline and an in-memory
// experiment draw the same random streams.
constexpr std::uint64_t kStageAnchors = 2;
constexpr std::uint64_t kStageInit = 3;
constexpr std::uint64_t kStageTrain = 4;

struct Options {
  std::uint64_t seed = 0;

  // inputs
  std::string manifest;
  std::string features;
  std::string counts;
  std::string pairs;
  std::string image;
  std::string model;
  std::string anchor_file;

  // outputs
  std::string out;
  std::string report;
  std::string anchors_out;

  // synthetic data
  std::size_t n = 200;
  std::int64_t count_min = 10;
  std::int64_t count_max = 500;
  int width = 256;
  int height = 256;

  // labels
  double ratio = 2.0;
  std::optional<std::size_t> max_pairs;

  // features and model
  int grid = FeatureConfig{}.grid;
  int tau = FeatureConfig{}.localmax_threshold;
  std::string hidden;

  // training
  std::string mode = "ranking_only";
  double margin = TrainConfig{}.margin;
  std::string margin_sign = "standard_plus";
  std::optional<double> xi;
  double alpha = TrainConfig{}.alpha;
  std::optional<double> count_norm;
  double lr = TrainConfig{}.lr;
  int epochs = TrainConfig{}.epochs;
  std::size_t anchors = 10;

  // evaluation
  std::string edges = "0,500,1000,2000,inf";
  double delta = 0.2;

  // sweep
  std::string param;
  std::string values;
  std::string seeds = "1,2,3,4,5";
  double train_fraction = 0.8;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui;
  int cap = kDefaultQueryCap;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw IoError("empty entry in list '" + text + "'");
    items.push_back(item.substr(b, e - b + 1));
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    if (item == "inf") {
      values.push_back(std::numeric_limits<double>::infinity());
    } else {
      values.push_back(csv::parse_double(item));
    }
  }
  return values;
}

std::vector<std::size_t> parse_hidden(const std::string& text) {
  std::vector<std::size_t> widths;
  if (text.empty()) return widths;
  for (const auto& item : split_list(text)) {
    const long long w = csv::parse_int(item);
    if (w < 1) throw DomainError("hidden layer widths must be >= 1");
    widths.push_back(static_cast<std::size_t>(w));
  }
  return widths;
}

MarginSign parse_margin_sign(const std::string& text) {
  if (text == "standard_plus") return MarginSign::standard_plus;
  if (text == "paper_literal_minus") return MarginSign::paper_literal_minus;
  throw DomainError("unknown margin sign '" + text + "' (expected standard_plus or paper_literal_minus)");
}

FeatureConfig feature_config(const Options& o) {
  FeatureConfig cfg;
  cfg.grid = o.grid;
  cfg.localmax_threshold = o.tau;
  return cfg;
}

TrainConfig train_config(const Options& o) {
  TrainConfig cfg;
  cfg.margin = o.margin;
  cfg.margin_sign = parse_margin_sign(o.margin_sign);
  cfg.filter_threshold = o.xi;
  cfg.alpha = o.alpha;
  cfg.count_norm = o.count_norm;
  cfg.lr = o.lr;
  cfg.epochs = o.epochs;
  return cfg;
}

std::size_t pair_budget(const Options& o) { return o.max_pairs.value_or(kUnlimitedPairs); }

// Images from --manifest (pixels) or --features (vectors), with counts from
// the manifest or from --counts.
std::vector<ImageSample> load_samples(const Options& o) {
  if (!o.manifest.empty() && !o.features.empty()) throw IoError("give either --manifest or --features, not both");
  std::vector<ImageSample> samples;
  if (!o.manifest.empty()) {
    samples = load_dataset(o.manifest);
  } else if (!o.features.empty()) {
    for (auto& row : load_feature_file(o.features)) samples.push_back({row.id, std::move(row.values), std::nullopt});
  } else {
    throw IoError("an input is required: --manifest or --features");
  }
  if (!o.counts.empty()) {
    const auto counts = read_count_file(o.counts);
    for (auto& s : samples) {
      auto it = counts.find(s.id);
      if (it != counts.end()) s.count = it->second;
    }
  }
  return samples;
}

CountMap known_counts(const std::vector<ImageSample>& samples) {
  CountMap counts;
  for (const auto& s : samples)
    if (s.count) counts[s.id] = *s.count;
  return counts;
}

CountMap require_counts(const std::vector<ImageSample>& samples, const char* why) {
  CountMap counts = known_counts(samples);
  if (counts.size() != samples.size()) {
    throw DomainError(std::string(why) + " needs a count for every image (manifest count column or --counts)");
  }
  return counts;
}

CountMap counts_input(const Options& o) {
  if (!o.counts.empty() && !o.manifest.empty()) throw IoError("give either --counts or --manifest, not both");
  if (!o.counts.empty()) return read_count_file(o.counts);
  if (!o.manifest.empty()) return counts_of(read_manifest(o.manifest));
  throw IoError("an input is required: --counts or --manifest");
}

// The anchor set from --anchor-file, or K anchors drawn from the known counts.
AnchorSet resolve_anchors(const Options& o, const CountMap& counts) {
  if (!o.anchor_file.empty()) return read_anchor_file(o.anchor_file);
  if (counts.empty()) throw DomainError("anchors need --anchor-file or images with counts");
  auto set = select_anchors(counts, o.anchors, derive_seed(o.seed, kStageAnchors));
  if (!o.anchors_out.empty()) write_anchor_file(o.anchors_out, set);
  return set;
}

FeatureTable feature_table(const CountingModel& model, const std::vector<ImageSample>& samples) {
  FeatureTable table;
  for (const auto& s : samples) table.emplace(s.id, features_for(model, s));
  return table;
}

std::vector<RankingPair> training_pairs(const std::string& path) {
  return build_graph(read_pair_file(path)).transitive_closure();
}

// --- subcommands -----------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  SyntheticConfig cfg;
  cfg.n = o.n;
  cfg.count_min = o.count_min;
  cfg.count_max = o.count_max;
  cfg.width = o.width;
  cfg.height = o.height;
  cfg.seed = o.seed;
  const auto samples = generate_synthetic(cfg);
  write_dataset(o.out, samples);
  out << "wrote " << samples.size() << " images to " << o.out << "\n";
  return 0;
}

int cmd_autolabel(const Options& o, std::ostream& out) {
  const auto pairs = autolabel_pairs(counts_input(o), o.ratio, pair_budget(o), o.seed);
  write_pair_file(o.out, pairs);
  out << "wrote " << pairs.size() << " pairs to " << o.out << "\n";
  return 0;
}

int cmd_sparse(const Options& o, std::ostream& out) {
  const auto pairs = sparse_pairs(counts_input(o), o.ratio, o.seed);
  write_pair_file(o.out, pairs);
  const auto report = sparsity_report(pairs);
  out << "wrote " << pairs.size() << " pairs to " << o.out << " (zeta_mean "
      << (report.zeta_mean ? csv::format_double(*report.zeta_mean) : std::string("n/a")) << ")\n";
  return 0;
}

int cmd_expand(const Options& o, std::ostream& out) {
  const auto graph = build_graph(read_pair_file(o.pairs));
  write_closure_file(o.out, graph.transitive_closure());
  const auto stats = graph.label_stats();
  out << "manual " << stats.manual << ", implied " << stats.implied << ", total " << stats.total << "\n";
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto samples = load_samples(o);
  const TrainMode mode = parse_train_mode(o.mode);
  TrainConfig cfg = train_config(o);
  if (mode == TrainMode::ranking_only) cfg.alpha = 0.0;
  cfg.seed = derive_seed(o.seed, kStageTrain);

  CountingModel model;
  if (samples.front().has_pixels()) model.features = feature_config(o);
  const auto features = feature_table(model, samples);
  const auto pairs = training_pairs(o.pairs);

  CountMap regression;
  if (mode == TrainMode::hybrid) regression = resolve_anchors(o, known_counts(samples)).counts();
  if (mode == TrainMode::fully) regression = require_counts(samples, "fully supervised training");

  auto init = prepare_model(features, parse_hidden(o.hidden), derive_seed(o.seed, kStageInit));
  auto [network, report] = train(features, pairs, regression, cfg, std::move(init));
  model.network = std::move(network);
  save_model(o.out, model);
  if (!o.report.empty()) write_train_report(o.report, report);

  const auto& last = report.epochs.back();
  out << "trained on " << pairs.size() << " pairs (" << to_string(mode) << "), " << report.optimizer_steps
      << " steps, final rank_acc " << csv::format_double(last.rank_acc) << "\n";
  return 0;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  CountingModel model = load_model(o.model);
  const auto samples = load_samples(o);
  const auto anchors = resolve_anchors(o, known_counts(samples));
  std::map<std::string, const ImageSample*> by_id;
  for (const auto& s : samples) by_id[s.id] = &s;
  std::vector<AnchorPoint> points;
  for (const auto& a : anchors.entries) {
    auto it = by_id.find(a.id);
    if (it == by_id.end()) throw DomainError("anchor '" + a.id + "' is not among the input images");
    points.push_back({potential_of(model, *it->second), static_cast<double>(a.count)});
  }
  model.anchor = fit_anchor_map(points);
  const std::string dest = o.out.empty() ? o.model : o.out;
  save_model(dest, model);
  out << "anchor map from " << points.size() << " anchors: count = " << csv::format_double(model.anchor->slope)
      << " * v + " << csv::format_double(model.anchor->intercept) << "\n";
  return 0;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const CountingModel model = load_model(o.model);
  std::vector<ImageSample> samples;
  if (!o.image.empty()) {
    samples.push_back({fs::path(o.image).stem().string(), read_pgm(o.image), std::nullopt});
  } else {
    samples = load_samples(o);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : samples) {
    const double v = potential_of(model, s);
    if (!model.anchor) throw DomainError("model is not calibrated; run calibrate first");
    rows.push_back({s.id, csv::format_double(v), csv::format_double(infer_count(*model.anchor, v))});
  }
  const std::vector<std::string> header{"id", "potential", "count"};
  if (!o.out.empty()) {
    csv::write_file(o.out, header, rows);
    out << "wrote " << rows.size() << " predictions to " << o.out << "\n";
  } else {
    out << csv::join_row(header) << "\n";
    for (const auto& r : rows) out << csv::join_row(r) << "\n";
  }
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const CountingModel model = load_model(o.model);
  if (!model.anchor) throw DomainError("model is not calibrated; run calibrate first");
  const auto samples = load_samples(o);
  const auto counts = require_counts(samples, "evaluation");

  std::map<std::string, double> potentials;
  std::vector<double> preds;
  std::vector<double> gts;
  for (const auto& s : samples) {
    const double v = potential_of(model, s);
    potentials[s.id] = v;
    preds.push_back(infer_count(*model.anchor, v));
    gts.push_back(static_cast<double>(*s.count));
  }

  MetricsReport report;
  report.n = preds.size();
  report.mae = mae(preds, gts);
  report.mse = mse(preds, gts);
  report.per_range = per_range_report(preds, gts, parse_double_list(o.edges), o.delta);
  const auto pairs = o.pairs.empty() ? autolabel_pairs(counts, o.ratio, kUnlimitedPairs, o.seed)
                                     : training_pairs(o.pairs);
  if (!pairs.empty()) {
    report.ranking_accuracy = ranking_accuracy(
        [&](const std::string& id) {
          auto it = potentials.find(id);
          if (it == potentials.end()) throw DomainError("pair id '" + id + "' is not among the input images");
          return it->second;
        },
        pairs);
  }
  if (!o.out.empty()) write_metrics_csv(o.out, report);
  out << format_metrics_table(report);
  return 0;
}

std::vector<double> default_sweep_values(SweepParameter p) {
  switch (p) {
    case SweepParameter::margin:
      return {0.0, 0.1, 0.5, 1.0, 3.0};
    case SweepParameter::anchor_size:
      return {10, 30, 50, 80, 150};
    case SweepParameter::ratio:
      return {1.0, 1.5, 2.0, 3.0};
  }
  return {};
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SweepParameter p = parse_sweep_parameter(o.param);
  ExperimentSpec base;
  base.data.n = o.n;
  base.data.count_min = o.count_min;
  base.data.count_max = o.count_max;
  base.data.width = o.width;
  base.data.height = o.height;
  base.train_fraction = o.train_fraction;
  base.ratio = o.ratio;
  base.max_pairs = pair_budget(o);
  base.anchors = o.anchors;
  base.mode = parse_train_mode(o.mode);
  base.train = train_config(o);
  base.features = feature_config(o);
  base.hidden = parse_hidden(o.hidden);
  base.range_edges = parse_double_list(o.edges);
  base.delta = o.delta;

  const auto values = o.values.empty() ? default_sweep_values(p) : parse_double_list(o.values);
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split_list(o.seeds)) {
    const long long v = csv::parse_int(s);
    if (v < 0) throw DomainError("seeds must be >= 0");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  const auto rows = sweep(p, values, base, seeds);
  if (!o.out.empty()) write_sweep_csv(o.out, p, rows);
  out << format_sweep_table(p, rows);
  return 0;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServiceConfig cfg;
  if (!o.manifest.empty()) cfg.manifest = fs::path(o.manifest);
  if (!o.ui.empty()) cfg.static_dir = fs::path(o.ui);
  cfg.default_cap = o.cap;
  AnnotationService service(cfg);
  const int port = service.bind(o.host, o.port);
  if (port < 0) throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  out << "listening on http://" << o.host << ":" << port << std::endl;
  if (!service.listen()) throw IoError("server stopped unexpectedly");
  return 0;
}

// --- flag registration -----------------------------------------------------

void add_seed(CLI::App* cmd, Options& o) { cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str(); }

void add_image_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "Image manifest CSV (id,path,count)");
  cmd->add_option("--features", o.features, "Feature CSV (id,f0,f1,...) instead of images");
  cmd->add_option("--counts", o.counts, "Count CSV (id,count) for feature inputs");
}

void add_feature_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid, "Feature grid size g (4*g*g features)")->capture_default_str();
  cmd->add_option("--tau", o.tau, "Local-maximum intensity threshold")->capture_default_str();
  cmd->add_option("--hidden", o.hidden, "Hidden layer widths, comma separated (empty: linear)");
}

void add_train_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "ranking_only, hybrid or fully")->capture_default_str();
  cmd->add_option("--margin", o.margin, "Hinge margin M")->capture_default_str();
  cmd->add_option("--margin-sign", o.margin_sign, "standard_plus or paper_literal_minus")->capture_default_str();
  cmd->add_option("--xi", o.xi, "Hard sample filter threshold (> 1); disabled when absent");
  cmd->add_option("--alpha", o.alpha, "Regression weight")->capture_default_str();
  cmd->add_option("--count-norm", o.count_norm, "Regression count scale C_norm");
  cmd->add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--epochs", o.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--anchors", o.anchors, "Anchor set size |B| when drawn from counts")->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--edges", o.edges, "Count range edges, comma separated (inf allowed)")->capture_default_str();
  cmd->add_option("--delta", o.delta, "Relative error tolerance for range accuracy")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Weakly-supervised counting from pairwise rankings", "rankcount"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic image dataset");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--n", o.n, "Number of images")->capture_default_str();
  synth->add_option("--count-min", o.count_min, "Smallest count")->capture_default_str();
  synth->add_option("--count-max", o.count_max, "Largest count")->capture_default_str();
  synth->add_option("--width", o.width, "Image width")->capture_default_str();
  synth->add_option("--height", o.height, "Image height")->capture_default_str();
  add_seed(synth, o);

  auto* autolabel = app.add_subcommand("autolabel", "Derive ranking pairs from counts by the ratio rule");
  autolabel->add_option("--counts", o.counts, "Count CSV (id,count)");
  autolabel->add_option("--manifest", o.manifest, "Image manifest with counts");
  autolabel->add_option("--ratio", o.ratio, "Minimum count ratio for a pair")->capture_default_str();
  autolabel->add_option("--max-pairs", o.max_pairs, "Pair budget (uniform subset when exceeded)");
  autolabel->add_option("--out", o.out, "Output pair CSV")->required();
  add_seed(autolabel, o);

  auto* sparse = app.add_subcommand("sparse", "Derive a matching of ranking pairs (each image at most once)");
  sparse->add_option("--counts", o.counts, "Count CSV (id,count)");
  sparse->add_option("--manifest", o.manifest, "Image manifest with counts");
  sparse->add_option("--ratio", o.ratio, "Minimum count ratio for a pair")->capture_default_str();
  sparse->add_option("--out", o.out, "Output pair CSV")->required();
  add_seed(sparse, o);

  auto* expand = app.add_subcommand("expand", "Write the transitive closure of a pair file");
  expand->add_option("--pairs", o.pairs, "Input pair CSV (i,j,q)")->required();
  expand->add_option("--out", o.out, "Output closure CSV (i,j,q,provenance)")->required();
  add_seed(expand, o);

  auto* train_cmd = app.add_subcommand("train", "Train the potential network on ranking pairs");
  add_image_input(train_cmd, o);
  train_cmd->add_option("--pairs", o.pairs, "Pair CSV; its transitive closure is used")->required();
  train_cmd->add_option("--anchor-file", o.anchor_file, "Anchor CSV (id,count) for hybrid mode");
  train_cmd->add_option("--anchors-out", o.anchors_out, "Write the drawn anchor set here");
  add_train_flags(train_cmd, o);
  add_feature_flags(train_cmd, o);
  train_cmd->add_option("--out", o.out, "Output model file")->required();
  train_cmd->add_option("--report", o.report, "Per-epoch training report CSV");
  add_seed(train_cmd, o);

  auto* calibrate = app.add_subcommand("calibrate", "Fit the anchor map of a trained model");
  calibrate->add_option("--model", o.model, "Model file")->required();
  add_image_input(calibrate, o);
  calibrate->add_option("--anchor-file", o.anchor_file, "Anchor CSV (id,count)");
  calibrate->add_option("--anchors", o.anchors, "Anchor set size |B| when drawn from counts")
      ->capture_default_str();
  calibrate->add_option("--anchors-out", o.anchors_out, "Write the drawn anchor set here");
  calibrate->add_option("--out", o.out, "Output model file (default: overwrite --model)");
  add_seed(calibrate, o);

  auto* infer = app.add_subcommand("infer", "Predict counts with a calibrated model");
  infer->add_option("--model", o.model, "Calibrated model file")->required();
  add_image_input(infer, o);
  infer->add_option("--image", o.image, "A single PGM image");
  infer->add_option("--out", o.out, "Output CSV (id,potential,count); stdout when absent");
  add_seed(infer, o);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a calibrated model against ground truth");
  eval_cmd->add_option("--model", o.model, "Calibrated model file")->required();
  add_image_input(eval_cmd, o);
  eval_cmd->add_option("--pairs", o.pairs, "Pairs for ranking accuracy (default: ratio rule on the counts)");
  eval_cmd->add_option("--ratio", o.ratio, "Ratio for the default evaluation pairs")->capture_default_str();
  add_eval_flags(eval_cmd, o);
  eval_cmd->add_option("--out", o.out, "Metrics CSV");
  add_seed(eval_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run synthetic experiments over one parameter");
  sweep_cmd->add_option("--param", o.param, "margin, anchor_size or ratio")->required();
  sweep_cmd->add_option("--values", o.values, "Comma separated values (default: the standard grid)");
  sweep_cmd->add_option("--seeds", o.seeds, "Comma separated seeds")->capture_default_str();
  sweep_cmd->add_option("--n", o.n, "Images per experiment")->capture_default_str();
  sweep_cmd->add_option("--count-min", o.count_min, "Smallest count")->capture_default_str();
  sweep_cmd->add_option("--count-max", o.count_max, "Largest count")->capture_default_str();
  sweep_cmd->add_option("--width", o.width, "Image width")->capture_default_str();
  sweep_cmd->add_option("--height", o.height, "Image height")->capture_default_str();
  sweep_cmd->add_option("--train-fraction", o.train_fraction, "Training share of the images")
      ->capture_default_str();
  sweep_cmd->add_option("--ratio", o.ratio, "Ratio rule for training pairs")->capture_default_str();
  sweep_cmd->add_option("--max-pairs", o.max_pairs, "Training pair budget");
  add_train_flags(sweep_cmd, o);
  add_feature_flags(sweep_cmd, o);
  add_eval_flags(sweep_cmd, o);
  sweep_cmd->add_option("--out", o.out, "Sweep CSV");
  add_seed(sweep_cmd, o);

  auto* serve = app.add_subcommand("serve", "Run the annotation HTTP service");
  serve->add_option("--manifest", o.manifest, "Image manifest served under /images");
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();
  serve->add_option("--port", o.port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--ui", o.ui, "Static UI directory mounted at /");
  serve->add_option("--cap", o.cap, "Default per-image query cap")->capture_default_str();
  add_seed(serve, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*synth) return cmd_synth(o, out);
    if (*autolabel) return cmd_autolabel(o, out);
    if (*sparse) return cmd_sparse(o, out);
    if (*expand) return cmd_expand(o, out);
    if (*train_cmd) return cmd_train(o, out);
    if (*calibrate) return cmd_calibrate(o, out);
    if (*infer) return cmd_infer(o, out);
    if (*eval_cmd) return cmd_eval(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rankcount::tools
