#pragma once

#include <vector>

#include "evoprune/moea/config.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/moea/problem.hpp"

namespace evoprune::moea {

/// n evenly spaced weights (k/(n-1), 1 - k/(n-1)), k = 0..n-1.
std::vector<ObjectiveVector> uniform_weights(std::size_t n);

/// For each weight, the indices of its `t` nearest weights (itself included),
/// nearest first, ties to the lower index.
std::vector<std::vector<std::size_t>> neighborhoods(const std::vector<ObjectiveVector>& weights, std::size_t t);

/// MOEA/D with Tchebycheff decomposition over scaled objectives
/// (f / problem.objective_scale()). Offspring of one generation are created
/// from the population at the start of that generation, evaluated (possibly in
/// parallel), then applied to their neighborhoods in subproblem order. Returns
/// the external non-dominated archive. trace[g].best_f1/best_f2 is the ideal
/// point after generation g.
ParetoFront moead_run(const Problem& problem, const EAConfig& cfg, const RunOptions& opts = {});

}  // namespace evoprune::moea
