#include "evoprune/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "evoprune/error.hpp"
#include "json.hpp"

namespace evoprune::metrics {

std::vector<std::size_t> pareto_filter_indices(std::span<const ObjectiveVector> points) {
  // Sweep in (f1, f2, index) order: a point survives iff its f2 is strictly
  // below every f2 seen so far. Identical points keep only the lowest index.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].f1 != points[b].f1) return points[a].f1 < points[b].f1;
    if (points[a].f2 != points[b].f2) return points[a].f2 < points[b].f2;
    return a < b;
  });
  std::vector<std::size_t> keep;
  bool first = true;
  double best_f2 = 0.0;
  for (std::size_t i : order) {
    if (first || points[i].f2 < best_f2) {
      keep.push_back(i);
      best_f2 = points[i].f2;
      first = false;
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<ObjectiveVector> pareto_filter(std::span<const ObjectiveVector> points) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i : pareto_filter_indices(points)) out.push_back(points[i]);
  return out;
}

moea::ParetoFront merge_fronts(const moea::ParetoFront& a, const moea::ParetoFront& b,
                               const NormalizationSpec& norm) {
  require_shared(norm, a.normalization, b.normalization);
  std::vector<ObjectiveVector> all;
  all.reserve(a.size() + b.size());
  for (const auto* f : {&a, &b}) {
    for (const auto& m : f->members) all.push_back(m.objectives);
  }
  moea::ParetoFront out;
  out.phase = a.phase + "+" + b.phase;
  out.seed = a.seed;
  out.created_at = moea::utc_timestamp();
  out.normalization = norm;
  for (std::size_t i : pareto_filter_indices(all)) {
    out.members.push_back(i < a.size() ? a.members[i] : b.members[i - a.size()]);
  }
  return out;
}

double hypervolume2(std::span<const ObjectiveVector> front, const NormalizationSpec& norm,
                    std::vector<std::string>* warnings) {
  if (front.empty()) {
    if (warnings) warnings->push_back("hypervolume of an empty front is 0");
    return 0.0;
  }
  std::vector<ObjectiveVector> pts;
  pts.reserve(front.size());
  std::size_t clipped = 0;
  for (const auto& p : front) {
    auto q = norm.normalize(p);
    const ObjectiveVector c{std::clamp(q.f1, 0.0, 1.0), std::clamp(q.f2, 0.0, 1.0)};
    if (!(c == q)) ++clipped;
    pts.push_back(c);
  }
  if (clipped > 0 && warnings) {
    warnings->push_back(std::to_string(clipped) + " point(s) outside the unit square were clipped");
  }
  auto nd = pareto_filter(pts);
  std::sort(nd.begin(), nd.end(), [](const auto& x, const auto& y) { return x.f1 < y.f1; });
  double hv = 0.0;
  for (std::size_t k = 0; k < nd.size(); ++k) {
    const double right = k + 1 < nd.size() ? nd[k + 1].f1 : 1.0;
    hv += (right - nd[k].f1) * (1.0 - nd[k].f2);
  }
  return hv;
}

DominanceSummary dominance_report(const moea::ParetoFront& p1, const moea::ParetoFront& p2,
                                  const ObjectiveVector& light_anchor, const NormalizationSpec& norm) {
  require_shared(norm, p1.normalization, p2.normalization);
  DominanceSummary s;
  s.phase1_solutions = p1.size();
  s.phase2_solutions = p2.size();

  const auto merged = merge_fronts(p1, p2, norm);
  s.merged_solutions = merged.size();
  // merge_fronts copies members in index order: survivors from p2 follow those from p1.
  const auto merged_idx = [&] {
    std::vector<ObjectiveVector> all = p1.objectives();
    for (const auto& m : p2.members) all.push_back(m.objectives);
    return pareto_filter_indices(all);
  }();
  for (std::size_t i : merged_idx) {
    if (i < p1.size()) continue;
    if (dominates(p2.members[i - p1.size()].objectives, light_anchor)) ++s.dominating;
  }

  const auto o1 = p1.objectives();
  const auto om = merged.objectives();
  s.phase1_hv = hypervolume2(o1, norm, &s.warnings);
  s.final_hv = hypervolume2(om, norm, &s.warnings);
  s.hv_delta = s.final_hv - s.phase1_hv;
  return s;
}

std::string summary_json(const DominanceSummary& s, const NormalizationSpec& norm) {
  nlohmann::ordered_json j;
  j["format"] = "evoprune-summary";
  j["version"] = 1;
  j["f1_ref"] = norm.f1_ref;
  j["Phase 1 HV"] = s.phase1_hv;
  j["# Phase 1 Pareto Solutions"] = s.phase1_solutions;
  j["# Phase 2 Pareto Solutions"] = s.phase2_solutions;
  j["# Dominating Phase 1"] = s.dominating;
  j["# Merged Pareto Solutions"] = s.merged_solutions;
  j["Final HV"] = s.final_hv;
  j["HV Delta"] = s.hv_delta;
  j["warnings"] = s.warnings;
  return j.dump(2) + "\n";
}

}  // namespace evoprune::metrics
