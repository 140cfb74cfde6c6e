#include "rankcount/model.hpp"

#include <cmath>
#include <string>

#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"

namespace rankcount {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw DomainError("a model needs an input and an output layer");
  if (dims.back() != 1) throw DomainError("the output layer must have exactly one unit");
  for (std::size_t d : dims)
    if (d == 0) throw DomainError("layer widths must be positive");
}

inline double activate(double z) { return z > 0.0 ? z : kLeakySlope * z; }
inline double activate_grad(double z) { return z > 0.0 ? 1.0 : kLeakySlope; }

void check_input(const PotentialModel& model, std::span<const double> features) {
  if (features.size() != model.input_dim()) {
    throw DomainError("feature length " + std::to_string(features.size()) + " does not match model input " +
                      std::to_string(model.input_dim()));
  }
}

}  // namespace

PotentialModel::PotentialModel(std::vector<std::size_t> layer_dims) : dims_(std::move(layer_dims)) {
  check_dims(dims_);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(total);
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
  norm_ = identity_normalization(dims_.front());
}

PotentialModel PotentialModel::initialize(std::vector<std::size_t> layer_dims, std::uint64_t seed) {
  PotentialModel model(std::move(layer_dims));
  Rng rng(seed);
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const double fan_in = static_cast<double>(model.dims_[l]);
    const double fan_out = static_cast<double>(model.dims_[l + 1]);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : model.weights(l)) w = rng.uniform(-limit, limit);
  }
  return model;
}

std::span<double> PotentialModel::weights(std::size_t layer) {
  return std::span(params_).subspan(offsets_[layer], dims_[layer] * dims_[layer + 1]);
}
std::span<const double> PotentialModel::weights(std::size_t layer) const {
  return std::span(params_).subspan(offsets_[layer], dims_[layer] * dims_[layer + 1]);
}
std::span<double> PotentialModel::biases(std::size_t layer) {
  return std::span(params_).subspan(bias_offset(layer), dims_[layer + 1]);
}
std::span<const double> PotentialModel::biases(std::size_t layer) const {
  return std::span(params_).subspan(bias_offset(layer), dims_[layer + 1]);
}

void PotentialModel::set_norm_stats(NormStats stats) {
  if (stats.dim() != input_dim() || stats.std.size() != input_dim()) {
    throw DomainError("normalization dim does not match model input");
  }
  for (double& s : stats.std) s = std::max(s, kMinStd);
  norm_ = std::move(stats);
}

double forward(const PotentialModel& model, std::span<const double> features) {
  check_input(model, features);
  const auto& dims = model.layer_dims();
  const auto& norm = model.norm_stats();
  std::vector<double> cur(features.size());
  for (std::size_t d = 0; d < features.size(); ++d) cur[d] = (features[d] - norm.mean[d]) / norm.std[d];
  std::vector<double> next;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const auto w = model.weights(l);
    const auto b = model.biases(l);
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const bool hidden = l + 1 < model.layer_count();
    next.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double z = b[r];
      const double* row = w.data() + r * in;
      for (std::size_t c = 0; c < in; ++c) z += row[c] * cur[c];
      next[r] = hidden ? activate(z) : z;
    }
    cur.swap(next);
  }
  return cur.front();
}

ForwardTrace forward_trace(const PotentialModel& model, std::span<const double> features) {
  check_input(model, features);
  const auto& dims = model.layer_dims();
  ForwardTrace trace;
  trace.activations.push_back(apply_normalization(features, model.norm_stats()));
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const auto w = model.weights(l);
    const auto b = model.biases(l);
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const bool hidden = l + 1 < model.layer_count();
    const auto& x = trace.activations.back();
    std::vector<double> z(out);
    std::vector<double> a(out);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = b[r];
      const double* row = w.data() + r * in;
      for (std::size_t c = 0; c < in; ++c) acc += row[c] * x[c];
      z[r] = acc;
      a[r] = hidden ? activate(acc) : acc;
    }
    trace.preactivations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

void accumulate_backward(const PotentialModel& model, const ForwardTrace& trace, double upstream,
                         std::span<double> grad) {
  if (grad.size() != model.parameter_count()) throw DomainError("gradient buffer has the wrong size");
  if (upstream == 0.0) return;
  const auto& dims = model.layer_dims();
  // delta holds dL/dz for the current layer.
  std::vector<double> delta{upstream};
  for (std::size_t l = model.layer_count(); l-- > 0;) {
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const auto& x = trace.activations[l];
    double* gw = grad.data() + model.weight_offset(l);
    double* gb = grad.data() + model.bias_offset(l);
    for (std::size_t r = 0; r < out; ++r) {
      const double d = delta[r];
      gb[r] += d;
      if (d == 0.0) continue;
      double* grow = gw + r * in;
      for (std::size_t c = 0; c < in; ++c) grow[c] += d * x[c];
    }
    if (l == 0) break;
    const auto w = model.weights(l);
    const auto& z_prev = trace.preactivations[l - 1];
    std::vector<double> prev(in, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      const double* row = w.data() + r * in;
      for (std::size_t c = 0; c < in; ++c) prev[c] += d * row[c];
    }
    for (std::size_t c = 0; c < in; ++c) prev[c] *= activate_grad(z_prev[c]);
    delta.swap(prev);
  }
}

std::vector<double> backward(const PotentialModel& model, const ForwardTrace& trace, double upstream) {
  std::vector<double> grad(model.parameter_count(), 0.0);
  accumulate_backward(model, trace, upstream, grad);
  return grad;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamConfig& config) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DomainError("adam: parameter, gradient and state sizes differ");
  }
  if (!(lr > 0.0)) throw DomainError("adam: learning rate must be positive");
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correct1 = 1.0 - std::pow(config.beta1, t);
  const double correct2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * g;
    state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[k] / correct1;
    const double v_hat = state.v[k] / correct2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace rankcount
