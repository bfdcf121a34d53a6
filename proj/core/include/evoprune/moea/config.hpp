#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "evoprune/objectives.hpp"

namespace evoprune::moea {

/// Engine hyperparameters. Defaults are the continuous-phase settings
/// (SBX p=0.9 eta=15, polynomial p=0.2 eta=20, 50 x 50).
struct EAConfig {
  int population = 50;
  int generations = 50;
  double crossover_prob = 0.9;
  double mutation_prob = 0.2;
  double sbx_eta = 15.0;
  double poly_eta = 20.0;
  int moead_neighbors = 15;
  double moead_mating_prob = 0.9;
  std::uint64_t seed = 0;

  /// MOEA/D on binary problems: evolve real proxies in [0,1] and threshold at
  /// 0.5 instead of varying bits directly.
  bool moead_proxy = false;
  /// Bit-flip probability scaled by per-bit importance (binary problems only).
  bool importance_mutation = false;

  void validate() const;

  /// Binary-mask settings: uniform crossover p=0.9, bit-flip p=0.05.
  static EAConfig binary_defaults();
};

struct RunOptions {
  std::size_t jobs = 1;
  /// Normalization used for the per-generation hypervolume in the trace; the
  /// trace records NaN when absent.
  std::optional<NormalizationSpec> trace_normalization;
};

}  // namespace evoprune::moea
