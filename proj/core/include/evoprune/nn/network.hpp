#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evoprune/bitmask.hpp"
#include "evoprune/nn/tensor.hpp"

namespace evoprune::data {
struct LabeledSet;
}

namespace evoprune::nn {

/// Fully connected layer. `weights` is (input width) x (output width), so the
/// canonical flattening of a layer is row-major over that shape.
struct Layer {
  std::string name;
  Tensor2 weights;
  std::vector<double> bias;
  bool prunable = true;

  std::size_t input_width() const noexcept { return weights.rows; }
  std::size_t output_width() const noexcept { return weights.cols; }

  /// Fraction of zero-valued weights, 1 - nonzero / total.
  double sparsity() const noexcept;
  std::size_t nonzero() const noexcept;

  friend bool operator==(const Layer&, const Layer&) = default;
};

enum class Activation { Relu };

/// ReLU on hidden layers, identity on the output layer.
struct Network {
  std::vector<Layer> layers;
  Activation activation = Activation::Relu;

  std::size_t input_width() const { return layers.front().input_width(); }
  std::size_t output_width() const { return layers.back().output_width(); }

  const Layer& layer(std::string_view name) const;

  /// Checks widths chain, names are unique and there are >= 2 layers.
  void validate() const;

  friend bool operator==(const Network&, const Network&) = default;
};

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1e-4;
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Layers are named fc1, fc2, ... Weights are uniform in +-sqrt(6 / fan_in),
/// biases zero. fc1 is marked non-prunable.
Network init_network(std::span<const std::size_t> layer_widths, std::uint64_t seed);

/// Logits for every row of `batch`. Pure.
Tensor2 forward(const Network& net, const Tensor2& batch);

/// Mini-batch Adam on softmax cross-entropy. Returns the trained copy.
Network train(const Network& net, const data::LabeledSet& data, const TrainConfig& cfg);

/// Fraction of rows whose argmax logit (lowest index on ties) equals the label.
double accuracy(const Network& net, const data::LabeledSet& data);

/// Number of correctly classified rows; accuracy() is this over the row count.
std::size_t correct_count(const Network& net, const data::LabeledSet& data);

/// Exactly-nonzero weights over prunable layers. Biases are not counted.
std::int64_t nonzero_count(const Network& net);

/// Total weight slots over prunable layers.
std::int64_t prunable_weight_count(const Network& net);

/// Zeroes every prunable weight w with th1 <= w <= th2.
Network apply_threshold(const Network& net, double th1, double th2);

/// Zeroes the j-th nonzero prunable weight (canonical order) where mask bit j is 0.
Network apply_mask(const Network& net, const BitMask& mask);

/// Smallest and largest prunable weight value.
std::pair<double, double> prunable_weight_range(const Network& net);

}  // namespace evoprune::nn
