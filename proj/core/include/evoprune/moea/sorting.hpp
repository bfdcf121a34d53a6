#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evoprune/moea/front.hpp"
#include "evoprune/objectives.hpp"

namespace evoprune::moea {

using Fronts = std::vector<std::vector<std::size_t>>;

/// Deb's fast non-dominated sort. fronts[0] is the non-dominated set; indices
/// within a front are ascending.
Fronts fast_nondominated_sort(std::span<const ObjectiveVector> points);

/// Same, over individuals. Throws ContractViolation for unevaluated ones.
Fronts fast_nondominated_sort(std::span<const Individual> pop);

/// Crowding distance of each point of one front. Boundary points per objective
/// get +inf; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/// Writes rank and crowding into `pop` and returns the fronts.
Fronts assign_rank_and_crowding(std::vector<Individual>& pop);

}  // namespace evoprune::moea
