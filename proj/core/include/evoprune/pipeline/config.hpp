#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoprune/data/dataset.hpp"
#include "evoprune/moea/config.hpp"
#include "evoprune/nn/network.hpp"
#include "evoprune/phase2.hpp"

namespace evoprune::pipeline {

inline constexpr int kConfigVersion = 1;

enum class EvalSubset { Opt, Val };

struct DatasetConfig {
  int classes = 4;
  int dim = 8;
  int per_class = 250;
  double spread = 1.0;
  double train_fraction = 0.5;
  double val_fraction = 0.1;
  int opt_per_class = 50;
};

struct NetworkConfig {
  std::vector<std::size_t> widths{8, 64, 96, 128, 4};
  std::vector<std::string> non_prunable{"fc1"};
};

/// Complete, validated run description. Every seed below the master seed is
/// derived from it.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "evoprune-run";
  std::size_t jobs = 1;

  DatasetConfig dataset;
  NetworkConfig network;
  nn::TrainConfig train;
  moea::EAConfig phase1 = moea::EAConfig{};
  EvalSubset phase1_eval = EvalSubset::Opt;
  moea::EAConfig phase2 = moea::EAConfig::binary_defaults();
  EvalSubset phase2_eval = EvalSubset::Opt;
  phase2::Engine engine = phase2::Engine::Nsga2;
  int bins = 5;
  phase2::ImportanceInitConfig importance;
  phase2::AnchorRule anchors;

  void validate() const;

  // Stage seeds derived from `seed`.
  std::uint64_t data_seed() const;
  std::uint64_t split_seed() const;
  std::uint64_t init_seed() const;
  std::uint64_t train_seed() const;
  std::uint64_t phase1_seed() const;
  std::uint64_t phase2_seed() const;
  std::uint64_t importance_seed() const;
};

/// Parses the JSON config text. Missing keys keep their defaults; unknown
/// keys, wrong types and a missing/mismatched "version" are ConfigErrors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Full JSON snapshot of the effective config (round-trips through parse_config).
std::string config_json(const RunConfig& cfg);

}  // namespace evoprune::pipeline
