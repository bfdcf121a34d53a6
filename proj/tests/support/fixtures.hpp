#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evoprune/data/dataset.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/nn/network.hpp"
#include "evoprune/objectives.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::testing {

/// Small trained classifier shared by the phase tests.
struct Trained {
  nn::Network net;
  data::Split split;
};

inline Trained make_trained(std::uint64_t seed, std::vector<std::size_t> widths = {4, 16, 32, 32, 3}) {
  const auto all = data::generate_blobs(3, 4, 100, 1.0, derive_seed(seed, "data"));
  data::SplitSpec spec;
  spec.train_fraction = 0.5;
  spec.val_fraction = 0.2;
  spec.opt_per_class = 20;
  spec.seed = derive_seed(seed, "split");
  Trained t;
  t.split = data::stratified_split(all, spec);
  nn::TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.epochs = 30;
  cfg.seed = derive_seed(seed, "train");
  t.net = nn::train(nn::init_network(widths, derive_seed(seed, "init")), t.split.train, cfg);
  return t;
}

inline const Trained& shared_trained() {
  static const Trained t = make_trained(7);
  return t;
}

/// O(n^2) reference: rank 0 for points dominated by nobody, then peel.
inline std::vector<int> brute_force_ranks(const std::vector<ObjectiveVector>& pts) {
  std::vector<int> rank(pts.size(), -1);
  std::size_t assigned = 0;
  for (int r = 0; assigned < pts.size(); ++r) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (rank[i] != -1) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
        dominated = rank[j] == -1 && j != i && dominates(pts[j], pts[i]);
      }
      if (!dominated) layer.push_back(i);
    }
    for (auto i : layer) rank[i] = r;
    assigned += layer.size();
  }
  return rank;
}

/// Monte-Carlo estimate of the area of [0,1]^2 dominated by `pts` (already normalized).
inline double monte_carlo_hv(const std::vector<ObjectiveVector>& pts, std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::size_t hit = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = uniform01(rng), y = uniform01(rng);
    for (const auto& p : pts) {
      if (p.f1 <= x && p.f2 <= y) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(samples);
}

/// Fresh directory under the system temp dir, emptied first.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("evoprune-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace evoprune::testing
