#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rankcount/features.hpp"

namespace rankcount {

inline constexpr double kLeakySlope = 0.01;

/// Feed-forward potential network f(x; w). Hidden layers use a leaky
/// rectifier, the single output unit is linear. Inputs are standardized with
/// the stored NormStats before the first layer.
///
/// All weights and biases live in one flat buffer so the optimizer can treat
/// them uniformly. Layer l occupies [offset, offset + out*in) for its
/// row-major weights followed by `out` biases.
class PotentialModel {
 public:
  PotentialModel() = default;

  /// Zero parameters, identity normalization. dims = {input, hidden..., 1}.
  explicit PotentialModel(std::vector<std::size_t> layer_dims);

  /// Glorot-uniform weights, zero biases.
  static PotentialModel initialize(std::vector<std::size_t> layer_dims, std::uint64_t seed);

  const std::vector<std::size_t>& layer_dims() const { return dims_; }
  std::size_t input_dim() const { return dims_.front(); }
  std::size_t layer_count() const { return dims_.size() - 1; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> biases(std::size_t layer);
  std::span<const double> biases(std::size_t layer) const;

  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + dims_[layer] * dims_[layer + 1];
  }

  const NormStats& norm_stats() const { return norm_; }
  void set_norm_stats(NormStats stats);

  bool operator==(const PotentialModel& other) const {
    return dims_ == other.dims_ && params_ == other.params_ && norm_ == other.norm_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  NormStats norm_;
};

/// Intermediate values of one forward pass, needed by backward().
/// activations[0] is the normalized input, activations.back() the output.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> preactivations;

  double potential() const { return activations.back().front(); }
};

/// Potential for raw (unnormalized) features. Throws DomainError on a
/// dimension mismatch.
double forward(const PotentialModel& model, std::span<const double> features);

ForwardTrace forward_trace(const PotentialModel& model, std::span<const double> features);

/// Adds upstream * dv/dw for every parameter into `grad`.
void accumulate_backward(const PotentialModel& model, const ForwardTrace& trace, double upstream,
                         std::span<double> grad);

/// Gradient of upstream * v with respect to all parameters.
std::vector<double> backward(const PotentialModel& model, const ForwardTrace& trace, double upstream);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

/// Bias-corrected Adam update in place; increments state.t.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamConfig& config = {});

}  // namespace rankcount
