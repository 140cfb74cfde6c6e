#include "rankcount/model_file.hpp"

#include <cmath>

#include <json.hpp>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

using nlohmann::json;

namespace {

json to_array(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("cannot serialize a non-finite parameter");
    arr.push_back(v);
  }
  return arr;
}

std::vector<double> from_array(const json& j, std::size_t expected, const char* what) {
  if (!j.is_array() || j.size() != expected) {
    throw IoError(std::string("model file: '") + what + "' should hold " + std::to_string(expected) +
                  " numbers");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : j) {
    if (!v.is_number()) throw IoError(std::string("model file: non-numeric entry in '") + what + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string serialize_model(const CountingModel& model) {
  const auto& net = model.network;
  json doc;
  doc["format"] = "rankcount-model";
  doc["version"] = kModelFormatVersion;
  doc["layer_dims"] = net.layer_dims();
  json layers = json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    layers.push_back({{"weights", to_array(net.weights(l))}, {"biases", to_array(net.biases(l))}});
  }
  doc["layers"] = std::move(layers);
  doc["norm_stats"] = {{"mean", to_array(net.norm_stats().mean)}, {"std", to_array(net.norm_stats().std)}};
  if (model.features) {
    doc["feature_config"] = {{"grid", model.features->grid},
                             {"localmax_threshold", model.features->localmax_threshold}};
  } else {
    doc["feature_config"] = nullptr;
  }
  if (model.anchor) {
    doc["anchor_map"] = {{"slope", model.anchor->slope}, {"intercept", model.anchor->intercept}};
  } else {
    doc["anchor_map"] = nullptr;
  }
  return doc.dump(1) + "\n";
}

CountingModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("model file: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "rankcount-model") throw IoError("model file: missing format tag");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw IoError("model file: unsupported version " + std::to_string(version));
    }
    auto dims = doc.at("layer_dims").get<std::vector<std::size_t>>();
    CountingModel model;
    try {
      model.network = PotentialModel(dims);
    } catch (const DomainError& e) {
      throw IoError(std::string("model file: ") + e.what());
    }
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.size() != dims.size() - 1) throw IoError("model file: layer count mismatch");
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      const auto w = from_array(layers[l].at("weights"), dims[l] * dims[l + 1], "weights");
      const auto b = from_array(layers[l].at("biases"), dims[l + 1], "biases");
      std::copy(w.begin(), w.end(), model.network.weights(l).begin());
      std::copy(b.begin(), b.end(), model.network.biases(l).begin());
    }
    const auto& norm = doc.at("norm_stats");
    NormStats stats{from_array(norm.at("mean"), dims.front(), "norm_stats.mean"),
                    from_array(norm.at("std"), dims.front(), "norm_stats.std")};
    model.network.set_norm_stats(std::move(stats));
    if (const auto& fc = doc.at("feature_config"); !fc.is_null()) {
      FeatureConfig cfg{fc.at("grid").get<int>(), fc.at("localmax_threshold").get<int>()};
      if (cfg.grid < 1 || cfg.feature_dim() != dims.front()) {
        throw IoError("model file: feature_config does not match the input dimension");
      }
      model.features = cfg;
    }
    if (const auto& am = doc.at("anchor_map"); !am.is_null()) {
      model.anchor = AnchorMap{am.at("slope").get<double>(), am.at("intercept").get<double>()};
    }
    return model;
  } catch (const json::exception& e) {
    throw IoError(std::string("model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const CountingModel& model) {
  csv::write_text(path, serialize_model(model));
}

CountingModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(csv::read_text(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<double> features_for(const CountingModel& model, const ImageSample& sample) {
  if (sample.has_pixels()) {
    if (!model.features) {
      throw DomainError("model expects feature vectors but '" + sample.id + "' is an image");
    }
    return extract_features(sample.pixels(), *model.features);
  }
  return sample.features();
}

double potential_of(const CountingModel& model, const ImageSample& sample) {
  return forward(model.network, features_for(model, sample));
}

double infer_count(const CountingModel& model, const ImageSample& sample) {
  if (!model.anchor) throw DomainError("model is not calibrated; run calibrate first");
  return infer_count(*model.anchor, potential_of(model, sample));
}

}  // namespace rankcount
