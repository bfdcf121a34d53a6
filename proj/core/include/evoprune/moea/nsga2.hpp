#pragma once

#include "evoprune/moea/config.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/moea/problem.hpp"

namespace evoprune::moea {

/// Elitist NSGA-II: binary crowded tournament, kind-appropriate variation,
/// (mu + lambda) survival by non-dominated sorting and crowding truncation.
/// Returns the final first front with objective duplicates removed.
ParetoFront nsga2_run(const Problem& problem, const EAConfig& cfg, const RunOptions& opts = {});

}  // namespace evoprune::moea
