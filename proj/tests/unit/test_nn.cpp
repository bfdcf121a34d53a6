#include <bit>
#include <cmath>
#include <fstream>

#include "doctest.h"
#include "evoprune/data/dataset.hpp"
#include "evoprune/error.hpp"
#include "evoprune/nn/checkpoint.hpp"
#include "evoprune/nn/network.hpp"
#include "fixtures.hpp"

using namespace evoprune;
using evoprune::testing::scratch_dir;

namespace {

nn::Layer dense(std::string name, std::size_t in, std::size_t out, std::vector<double> w, std::vector<double> b,
                bool prunable = true) {
  return {std::move(name), nn::Tensor2(in, out, std::move(w)), std::move(b), prunable};
}

nn::Network random_net(std::vector<std::size_t> widths, std::uint64_t seed) {
  auto net = nn::init_network(widths, seed);
  Rng rng = make_rng(seed + 1);
  for (auto& l : net.layers) {
    for (auto& b : l.bias) b = uniform01(rng) - 0.5;
  }
  return net;
}

data::LabeledSet random_set(std::size_t rows, std::size_t dim, int classes, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  data::LabeledSet s;
  s.classes = classes;
  s.features = nn::Tensor2(rows, dim);
  for (auto& v : s.features.values) v = 4.0 * uniform01(rng) - 2.0;
  for (std::size_t r = 0; r < rows; ++r) s.labels.push_back(static_cast<int>(uniform_int(rng, 0, classes - 1)));
  return s;
}

// Per-row argmax, written independently of the library's evaluation loop.
double accuracy_oracle(const nn::Network& net, const data::LabeledSet& set) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < set.size(); ++r) {
    nn::Tensor2 one(1, set.features.cols, std::vector<double>(set.features.row(r).begin(), set.features.row(r).end()));
    const auto logits = nn::forward(net, one);
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.cols; ++c) {
      if (logits(0, c) > logits(0, best)) best = c;
    }
    hits += static_cast<int>(best) == set.labels[r];
  }
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

std::int64_t flat_scan_nonzeros(const nn::Network& net) {
  std::int64_t n = 0;
  for (const auto& l : net.layers) {
    if (!l.prunable) continue;
    for (double w : l.weights.values) n += w != 0.0;
  }
  return n;
}

// Multinomial logistic regression by full-batch gradient descent.
double logistic_oracle_accuracy(const data::LabeledSet& train, const data::LabeledSet& test) {
  const std::size_t d = train.features.cols, k = static_cast<std::size_t>(train.classes);
  std::vector<double> w((d + 1) * k, 0.0);
  auto logits = [&](std::span<const double> x, std::vector<double>& z) {
    for (std::size_t c = 0; c < k; ++c) {
      z[c] = w[d * k + c];
      for (std::size_t i = 0; i < d; ++i) z[c] += x[i] * w[i * k + c];
    }
  };
  std::vector<double> z(k), grad(w.size());
  for (int it = 0; it < 500; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r = 0; r < train.size(); ++r) {
      const auto x = train.features.row(r);
      logits(x, z);
      const double m = *std::max_element(z.begin(), z.end());
      double sum = 0;
      for (auto& v : z) sum += (v = std::exp(v - m));
      for (std::size_t c = 0; c < k; ++c) {
        const double g = z[c] / sum - (static_cast<int>(c) == train.labels[r] ? 1.0 : 0.0);
        for (std::size_t i = 0; i < d; ++i) grad[i * k + c] += g * x[i];
        grad[d * k + c] += g;
      }
    }
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= 0.5 * grad[j] / static_cast<double>(train.size());
  }
  std::size_t hits = 0;
  for (std::size_t r = 0; r < test.size(); ++r) {
    logits(test.features.row(r), z);
    hits += static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin()) == test.labels[r];
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace

TEST_SUITE("nn") {
  TEST_CASE("init_network shapes, names, ranges and determinism") {
    const std::vector<std::size_t> widths{2, 3, 2};
    const auto net = nn::init_network(widths, 7);
    REQUIRE(net.layers.size() == 2);
    CHECK(net.layers[0].name == "fc1");
    CHECK(net.layers[1].name == "fc2");
    CHECK(net.layers[0].weights.size() == 6);
    CHECK(net.layers[1].weights.size() == 6);
    CHECK(net.layers[0].bias.size() == 3);
    CHECK(net.layers[1].bias.size() == 2);
    CHECK_FALSE(net.layers[0].prunable);
    CHECK(net.layers[1].prunable);
    for (const auto& l : net.layers) {
      const double lim = std::sqrt(6.0 / static_cast<double>(l.input_width()));
      for (double w : l.weights.values) CHECK(std::abs(w) <= lim);
      for (double b : l.bias) CHECK(b == 0.0);
    }
    CHECK(nn::init_network(widths, 7) == net);
    CHECK_FALSE(nn::init_network(widths, 8) == net);
    const std::vector<std::size_t> single{5};
    CHECK_THROWS_AS(nn::init_network(single, 1), InvalidSpecError);
  }

  TEST_CASE("forward through an identity hidden layer applies relu") {
    nn::Network net;
    net.layers.push_back(dense("fc1", 2, 2, {1, 0, 0, 1}, {0, 0}));
    net.layers.push_back(dense("fc2", 2, 2, {1, 0, 0, 1}, {0, 0}));
    const auto out = nn::forward(net, nn::Tensor2(2, 2, {1, 0, -1, 2}));
    CHECK(out == nn::Tensor2(2, 2, {1, 0, 0, 2}));
  }

  TEST_CASE("forward with zero weights returns the output bias") {
    nn::Network net;
    net.layers.push_back(dense("fc1", 3, 2, std::vector<double>(6, 0.0), {0.5, -1}));
    net.layers.push_back(dense("fc2", 2, 3, std::vector<double>(6, 0.0), {0.1, 0.2, 0.3}));
    const auto out = nn::forward(net, nn::Tensor2(2, 3, {1, 2, 3, 4, 5, 6}));
    for (std::size_t r = 0; r < 2; ++r) {
      CHECK(out(r, 0) == 0.1);
      CHECK(out(r, 1) == 0.2);
      CHECK(out(r, 2) == 0.3);
    }
  }

  TEST_CASE("forward is row-decomposable") {
    const auto net = random_net({5, 7, 4, 3}, 3);
    const auto set = random_set(4, 5, 3, 9);
    const auto batch = nn::forward(net, set.features);
    for (std::size_t r = 0; r < 4; ++r) {
      nn::Tensor2 one(1, 5, std::vector<double>(set.features.row(r).begin(), set.features.row(r).end()));
      const auto single = nn::forward(net, one);
      for (std::size_t c = 0; c < 3; ++c) CHECK(single(0, c) == batch(r, c));
    }
    CHECK_THROWS_AS(nn::forward(net, nn::Tensor2(2, 4)), ShapeError);
  }

  TEST_CASE("accuracy matches the per-row oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto net = random_net({4, 6, 3}, seed);
      const auto set = random_set(60, 4, 3, seed + 100);
      CHECK(nn::accuracy(net, set) == accuracy_oracle(net, set));
      CHECK(nn::correct_count(net, set) * 1.0 / 60 == nn::accuracy(net, set));
    }
  }

  TEST_CASE("constant-class predictor scores the class share; ties go to the lowest index") {
    nn::Network net;
    net.layers.push_back(dense("fc1", 2, 2, std::vector<double>(4, 0.0), {0, 0}));
    net.layers.push_back(dense("fc2", 2, 4, std::vector<double>(8, 0.0), {0, 0, 0, 0}));
    data::LabeledSet set;
    set.classes = 4;
    set.features = nn::Tensor2(8, 2, 1.0);
    set.labels = {0, 1, 2, 3, 0, 1, 2, 3};
    CHECK(nn::accuracy(net, set) == 0.25);
    data::LabeledSet empty;
    empty.classes = 4;
    CHECK_THROWS_AS(nn::accuracy(net, empty), EmptyDataError);
  }

  TEST_CASE("training reaches the logistic-regression oracle on separable blobs") {
    const auto blobs = data::generate_blobs(2, 2, 100, 1.0, 5);
    nn::TrainConfig cfg;
    cfg.epochs = 10;
    cfg.learning_rate = 1e-2;
    cfg.seed = 1;
    const auto init = nn::init_network(std::vector<std::size_t>{2, 16, 2}, 3);
    const auto net = nn::train(init, blobs, cfg);
    const double oracle = logistic_oracle_accuracy(blobs, blobs);
    CHECK(oracle >= 0.99);
    CHECK(nn::accuracy(net, blobs) >= 0.99);
    CHECK(nn::accuracy(net, blobs) > nn::accuracy(init, blobs) - 1e-12);
  }

  TEST_CASE("training is deterministic and validates its config") {
    const auto blobs = data::generate_blobs(3, 3, 30, 1.0, 2);
    const auto init = nn::init_network(std::vector<std::size_t>{3, 8, 3}, 4);
    nn::TrainConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 9;
    CHECK(nn::train(init, blobs, cfg) == nn::train(init, blobs, cfg));
    cfg.epochs = 0;
    CHECK_THROWS_AS(nn::train(init, blobs, cfg), InvalidSpecError);
    cfg.epochs = 1;
    cfg.learning_rate = 0;
    CHECK_THROWS_AS(nn::train(init, blobs, cfg), InvalidSpecError);
    cfg.learning_rate = 1e-3;
    data::LabeledSet empty;
    empty.classes = 3;
    empty.features = nn::Tensor2(0, 3);
    CHECK_THROWS_AS(nn::train(init, empty, cfg), EmptyDataError);
  }

  TEST_CASE("nonzero_count counts prunable weights only") {
    auto net = nn::init_network(std::vector<std::size_t>{2, 3, 2}, 7);
    CHECK(nn::nonzero_count(net) == 6);
    CHECK(nn::prunable_weight_count(net) == 6);
    for (auto& l : net.layers) std::fill(l.weights.values.begin(), l.weights.values.end(), 0.0);
    CHECK(nn::nonzero_count(net) == 0);
  }

  TEST_CASE("nonzero_count after masking equals a flat scan") {
    const auto net = random_net({6, 20, 20, 4}, 11);
    Rng rng = make_rng(2);
    BitMask mask(static_cast<std::size_t>(nn::nonzero_count(net)));
    std::size_t ones = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask.set(i, uniform01(rng) >= 0.4);
      ones += mask[i];
    }
    const auto masked = nn::apply_mask(net, mask);
    CHECK(nn::nonzero_count(masked) == flat_scan_nonzeros(masked));
    CHECK(nn::nonzero_count(masked) == static_cast<std::int64_t>(ones));
  }

  TEST_CASE("apply_threshold zeroes the closed interval") {
    nn::Network net;
    net.layers.push_back(dense("fc1", 1, 3, {-0.5, 0.1, 0.3}, {0.1, 0.1, 0.1}, false));
    net.layers.push_back(dense("fc2", 3, 1, {-0.5, 0.1, 0.3}, {0.1}));
    const auto out = nn::apply_threshold(net, 0.0, 0.2);
    CHECK(out.layers[1].weights.values == std::vector<double>{-0.5, 0.0, 0.3});
    CHECK(out.layers[0] == net.layers[0]);
    CHECK(out.layers[1].bias == net.layers[1].bias);
    CHECK(nn::apply_threshold(out, 0.0, 0.2) == out);
    CHECK(nn::apply_threshold(net, 0.1, 0.1).layers[1].weights.values == std::vector<double>{-0.5, 0.0, 0.3});
    CHECK(nn::apply_threshold(net, 5.0, 6.0) == net);
    const auto [lo, hi] = nn::prunable_weight_range(net);
    CHECK(nn::nonzero_count(nn::apply_threshold(net, lo, hi)) == 0);
    CHECK_THROWS_AS(nn::apply_threshold(net, 0.3, 0.1), InvalidIntervalError);
    CHECK_THROWS_AS(nn::apply_threshold(net, std::nan(""), 0.1), InvalidIntervalError);
  }

  TEST_CASE("apply_mask follows the canonical order and leaves biases alone") {
    nn::Network net;
    net.layers.push_back(dense("fc1", 2, 2, {1, 2, 3, 4}, {9, 9}, false));
    net.layers.push_back(dense("fc2", 2, 2, {5, 0, 6, 7}, {8, 8}));
    net.layers.push_back(dense("fc3", 2, 1, {0.5, -0.5}, {1}));
    // universe: fc2 {5, 6, 7}, fc3 {0.5, -0.5}
    const BitMask mask(std::vector<std::uint8_t>{1, 0, 1, 0, 1});
    const auto out = nn::apply_mask(net, mask);
    CHECK(out.layers[0] == net.layers[0]);
    CHECK(out.layers[1].weights.values == std::vector<double>{5, 0, 0, 7});
    CHECK(out.layers[2].weights.values == std::vector<double>{0, -0.5});
    CHECK(out.layers[1].bias == net.layers[1].bias);
    CHECK(nn::apply_mask(net, BitMask(5, true)) == net);
    CHECK(nn::nonzero_count(nn::apply_mask(net, BitMask(5, false))) == 0);
    CHECK_THROWS_AS(nn::apply_mask(net, BitMask(4, true)), ShapeError);
  }
}

TEST_SUITE("checkpoint") {
  TEST_CASE("round trip is bit-exact and re-saving gives identical bytes") {
    const auto dir = scratch_dir("ckpt");
    auto net = random_net({3, 5, 2}, 4);
    net.layers[1].weights.values[0] = -0.0;
    net.layers[1].weights.values[1] = 1e-310;
    nn::save_checkpoint({net, 77}, dir / "a.json");
    const auto back = nn::load_checkpoint(dir / "a.json");
    CHECK(back.seed == 77);
    REQUIRE(back.network.layers.size() == net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      const auto& a = net.layers[i];
      const auto& b = back.network.layers[i];
      CHECK(a.name == b.name);
      CHECK(a.prunable == b.prunable);
      REQUIRE(a.weights.size() == b.weights.size());
      for (std::size_t j = 0; j < a.weights.size(); ++j) {
        CHECK(std::bit_cast<std::uint64_t>(a.weights.values[j]) == std::bit_cast<std::uint64_t>(b.weights.values[j]));
      }
      CHECK(a.bias == b.bias);
    }
    nn::save_checkpoint(back, dir / "b.json");
    auto bytes = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(bytes(dir / "a.fc1.bin") == bytes(dir / "b.fc1.bin"));
    CHECK(bytes(dir / "a.fc2.bin") == bytes(dir / "b.fc2.bin"));
  }

  TEST_CASE("damaged checkpoints are format errors") {
    const auto dir = scratch_dir("ckpt-bad");
    nn::save_checkpoint({random_net({3, 4, 2}, 1), 1}, dir / "m.json");

    std::filesystem::resize_file(dir / "m.fc2.bin", 16);
    CHECK_THROWS_AS(nn::load_checkpoint(dir / "m.json"), FormatError);
    std::filesystem::remove(dir / "m.fc2.bin");
    CHECK_THROWS_AS(nn::load_checkpoint(dir / "m.json"), FormatError);

    nn::save_checkpoint({random_net({3, 4, 2}, 1), 1}, dir / "m.json");
    std::ifstream in(dir / "m.json");
    std::string text(std::istreambuf_iterator<char>(in), {});
    in.close();
    const auto pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    std::ofstream(dir / "m.json") << text;
    CHECK_THROWS_AS(nn::load_checkpoint(dir / "m.json"), FormatError);

    std::ofstream(dir / "junk.json") << "{ not json";
    CHECK_THROWS_AS(nn::load_checkpoint(dir / "junk.json"), FormatError);
    CHECK_THROWS_AS(nn::load_checkpoint(dir / "absent.json"), IoError);
  }
}
