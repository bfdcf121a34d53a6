#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evoprune/moea/front.hpp"
#include "evoprune/objectives.hpp"

namespace evoprune::metrics {

/// Indices of the non-dominated points; among objective-identical points only
/// the first (lowest index) survives. Ascending index order.
std::vector<std::size_t> pareto_filter_indices(std::span<const ObjectiveVector> points);

std::vector<ObjectiveVector> pareto_filter(std::span<const ObjectiveVector> points);

/// Non-dominated union of two fronts. Members of `a` win objective ties, and
/// every survivor keeps its origin tag. Both fronts must either carry no
/// normalization or carry `norm`.
moea::ParetoFront merge_fronts(const moea::ParetoFront& a, const moea::ParetoFront& b,
                               const NormalizationSpec& norm);

/// Exact 2-D hypervolume of the normalized points against reference (1, 1).
/// Points outside the unit square are clipped; clipping and empty input are
/// reported through `warnings` when given.
double hypervolume2(std::span<const ObjectiveVector> front, const NormalizationSpec& norm,
                    std::vector<std::string>* warnings = nullptr);

struct DominanceSummary {
  std::size_t phase1_solutions = 0;
  std::size_t phase2_solutions = 0;
  /// Phase-2 members that strictly dominate the light anchor and survive the merge.
  std::size_t dominating = 0;
  std::size_t merged_solutions = 0;
  double phase1_hv = 0.0;
  double final_hv = 0.0;
  double hv_delta = 0.0;
  std::vector<std::string> warnings;
};

DominanceSummary dominance_report(const moea::ParetoFront& p1, const moea::ParetoFront& p2,
                                  const ObjectiveVector& light_anchor, const NormalizationSpec& norm);

/// JSON object keyed by the report row names ("Phase 1 HV",
/// "# Phase 2 Pareto Solutions", "# Dominating Phase 1", "Final HV", ...).
std::string summary_json(const DominanceSummary& s, const NormalizationSpec& norm);

}  // namespace evoprune::metrics
