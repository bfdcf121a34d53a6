#include "evoprune/moea/sorting.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "evoprune/error.hpp"

namespace evoprune::moea {

Fronts fast_nondominated_sort(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  Fronts fronts;
  if (n == 0) return fronts;

  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by_me[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated_by_me[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated_by_me[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

Fronts fast_nondominated_sort(std::span<const Individual> pop) {
  std::vector<ObjectiveVector> points;
  points.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].objectives) throw ContractViolation("individual " + std::to_string(i) + " is not evaluated");
    points.push_back(*pop[i].objectives);
  }
  return fast_nondominated_sort(points);
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;

  std::vector<std::size_t> order(n);
  for (auto member : {&ObjectiveVector::f1, &ObjectiveVector::f2}) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a].*member < front[b].*member; });
    const double lo = front[order.front()].*member;
    const double hi = front[order.back()].*member;
    const double range = hi - lo;
    if (range <= 0.0) continue;
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const std::size_t i = order[k];
      if (dist[i] == inf) continue;
      dist[i] += (front[order[k + 1]].*member - front[order[k - 1]].*member) / range;
    }
  }
  return dist;
}

Fronts assign_rank_and_crowding(std::vector<Individual>& pop) {
  Fronts fronts = fast_nondominated_sort(std::span<const Individual>(pop));
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<ObjectiveVector> pts;
    pts.reserve(fronts[r].size());
    for (std::size_t i : fronts[r]) pts.push_back(*pop[i].objectives);
    const auto cd = crowding_distance(pts);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      pop[fronts[r][k]].rank = static_cast<int>(r);
      pop[fronts[r][k]].crowding = cd[k];
    }
  }
  return fronts;
}

}  // namespace evoprune::moea
