#include "evoprune/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <limits>

#include "evoprune/data/dataset.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::nn {

std::size_t Layer::nonzero() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(weights.values.begin(), weights.values.end(), [](double w) { return w != 0.0; }));
}

double Layer::sparsity() const noexcept {
  if (weights.size() == 0) return 0.0;
  return 1.0 - static_cast<double>(nonzero()) / static_cast<double>(weights.size());
}

const Layer& Network::layer(std::string_view name) const {
  for (const auto& l : layers) {
    if (l.name == name) return l;
  }
  throw InvalidSpecError("no layer named '" + std::string(name) + "'");
}

void Network::validate() const {
  if (layers.size() < 2) throw InvalidSpecError("network needs at least 2 layers");
  std::set<std::string> names;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (!names.insert(l.name).second) throw InvalidSpecError("duplicate layer name '" + l.name + "'");
    if (l.weights.rows == 0 || l.weights.cols == 0) throw ShapeError("layer '" + l.name + "' is empty");
    if (l.weights.values.size() != l.weights.rows * l.weights.cols) {
      throw ShapeError("layer '" + l.name + "' weight storage does not match its shape");
    }
    if (l.bias.size() != l.output_width()) throw ShapeError("layer '" + l.name + "' bias width mismatch");
    if (k + 1 < layers.size() && l.output_width() != layers[k + 1].input_width()) {
      throw ShapeError("layer '" + l.name + "' output width does not match next layer input");
    }
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidSpecError("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidSpecError("learning_rate must be > 0");
  if (batch_size < 1) throw InvalidSpecError("batch_size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidSpecError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InvalidSpecError("epsilon must be > 0");
}

Network init_network(std::span<const std::size_t> layer_widths, std::uint64_t seed) {
  if (layer_widths.size() < 2) throw InvalidSpecError("need at least 2 layer widths");
  for (auto w : layer_widths) {
    if (w == 0) throw InvalidSpecError("layer widths must be positive");
  }
  Rng rng = make_rng(seed);
  Network net;
  for (std::size_t k = 0; k + 1 < layer_widths.size(); ++k) {
    const std::size_t in = layer_widths[k];
    const std::size_t out = layer_widths[k + 1];
    Layer layer;
    layer.name = "fc" + std::to_string(k + 1);
    layer.weights = Tensor2(in, out);
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    for (auto& w : layer.weights.values) w = (2.0 * uniform01(rng) - 1.0) * limit;
    layer.bias.assign(out, 0.0);
    layer.prunable = k != 0;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace {

// out = act(in * W + b); in is (n x in_width).
void dense(const Layer& layer, const Tensor2& in, Tensor2& out, bool relu) {
  const std::size_t n = in.rows;
  const std::size_t iw = layer.input_width();
  const std::size_t ow = layer.output_width();
  out = Tensor2(n, ow);
  for (std::size_t r = 0; r < n; ++r) {
    double* o = out.values.data() + r * ow;
    std::copy(layer.bias.begin(), layer.bias.end(), o);
    const double* x = in.values.data() + r * iw;
    for (std::size_t i = 0; i < iw; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      const double* w = layer.weights.values.data() + i * ow;
      for (std::size_t j = 0; j < ow; ++j) o[j] += xi * w[j];
    }
    if (relu) {
      for (std::size_t j = 0; j < ow; ++j) o[j] = o[j] > 0.0 ? o[j] : 0.0;
    }
  }
}

}  // namespace

Tensor2 forward(const Network& net, const Tensor2& batch) {
  if (net.layers.empty()) throw InvalidSpecError("empty network");
  if (batch.cols != net.input_width()) {
    throw ShapeError("batch has " + std::to_string(batch.cols) + " columns, network expects " +
                     std::to_string(net.input_width()));
  }
  Tensor2 a = batch;
  Tensor2 b;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    dense(net.layers[k], a, b, k + 1 < net.layers.size());
    std::swap(a, b);
  }
  return a;
}

std::size_t correct_count(const Network& net, const data::LabeledSet& data) {
  if (data.empty()) throw EmptyDataError("accuracy on an empty dataset");
  if (data.features.rows != data.labels.size()) throw ShapeError("labels do not match feature rows");
  const Tensor2 logits = forward(net, data.features);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < logits.rows; ++r) {
    auto row = logits.row(r);
    // max_element returns the first maximum, i.e. the lowest class index on ties.
    const auto pred = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    if (pred == data.labels[r]) ++correct;
  }
  return correct;
}

double accuracy(const Network& net, const data::LabeledSet& data) {
  const std::size_t correct = correct_count(net, data);
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::int64_t nonzero_count(const Network& net) {
  std::int64_t n = 0;
  for (const auto& l : net.layers) {
    if (l.prunable) n += static_cast<std::int64_t>(l.nonzero());
  }
  return n;
}

std::int64_t prunable_weight_count(const Network& net) {
  std::int64_t n = 0;
  for (const auto& l : net.layers) {
    if (l.prunable) n += static_cast<std::int64_t>(l.weights.size());
  }
  return n;
}

Network apply_threshold(const Network& net, double th1, double th2) {
  if (std::isnan(th1) || std::isnan(th2) || th1 > th2) {
    throw InvalidIntervalError("th1 must be <= th2 (got " + std::to_string(th1) + ", " + std::to_string(th2) + ")");
  }
  Network out = net;
  for (auto& l : out.layers) {
    if (!l.prunable) continue;
    for (auto& w : l.weights.values) {
      if (th1 <= w && w <= th2) w = 0.0;
    }
  }
  return out;
}

Network apply_mask(const Network& net, const BitMask& mask) {
  const auto universe = static_cast<std::size_t>(nonzero_count(net));
  if (mask.size() != universe) {
    throw ShapeError("mask length " + std::to_string(mask.size()) + " does not match " + std::to_string(universe) +
                     " nonzero prunable weights");
  }
  Network out = net;
  std::size_t j = 0;
  for (auto& l : out.layers) {
    if (!l.prunable) continue;
    for (auto& w : l.weights.values) {
      if (w == 0.0) continue;
      if (!mask[j]) w = 0.0;
      ++j;
    }
  }
  return out;
}

std::pair<double, double> prunable_weight_range(const Network& net) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& l : net.layers) {
    if (!l.prunable) continue;
    for (double w : l.weights.values) {
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  if (lo > hi) throw InvalidSpecError("network has no prunable weights");
  return {lo, hi};
}

}  // namespace evoprune::nn
