#include "evoprune/moea/nsga2.hpp"

#include <algorithm>
#include <numeric>

#include "engine.hpp"
#include "evoprune/moea/sorting.hpp"

namespace evoprune::moea {

namespace {

// Crowded comparison: lower rank wins, then larger crowding; ties keep `a`.
std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
  const auto n = static_cast<std::int64_t>(pop.size());
  const auto a = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
  auto b = static_cast<std::size_t>(uniform_int(rng, 0, n - 2));
  if (b >= a) ++b;
  if (pop[b].rank < pop[a].rank) return b;
  if (pop[b].rank == pop[a].rank && pop[b].crowding > pop[a].crowding) return b;
  return a;
}

std::vector<Individual> environmental_selection(std::vector<Individual> merged, std::size_t target) {
  const Fronts fronts = fast_nondominated_sort(std::span<const Individual>(merged));
  std::vector<Individual> next;
  next.reserve(target);
  for (const auto& front : fronts) {
    if (next.size() + front.size() <= target) {
      for (std::size_t i : front) next.push_back(std::move(merged[i]));
      if (next.size() == target) break;
      continue;
    }
    std::vector<ObjectiveVector> pts;
    for (std::size_t i : front) pts.push_back(*merged[i].objectives);
    const auto cd = crowding_distance(pts);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cd[x] > cd[y]; });
    for (std::size_t k = 0; next.size() < target; ++k) next.push_back(std::move(merged[front[order[k]]]));
    break;
  }
  return next;
}

}  // namespace

ParetoFront nsga2_run(const Problem& problem, const EAConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.population);
  const auto identity = [](const Genome& g) -> const Genome& { return g; };

  std::vector<Individual> pop;
  {
    auto genomes = detail::initial_genomes(problem, n, cfg.seed);
    const auto objs = detail::evaluate_all(problem, genomes, opts.jobs, identity);
    for (std::size_t i = 0; i < n; ++i) pop.push_back({std::move(genomes[i]), objs[i], -1, 0.0, 0});
  }
  assign_rank_and_crowding(pop);

  ParetoFront result;
  result.phase = "nsga2";
  result.seed = cfg.seed;
  result.created_at = utc_timestamp();
  result.normalization = opts.trace_normalization;

  auto record = [&](int generation) {
    std::vector<ObjectiveVector> pts;
    for (const auto& ind : pop) pts.push_back(*ind.objectives);
    result.trace.push_back(detail::make_record(generation, pts, detail::componentwise_min(pts), opts));
  };
  record(0);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Genome> children(n);
    for (std::size_t pair = 0; pair < n / 2; ++pair) {
      Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(gen), pair));
      const std::size_t a = tournament(pop, rng);
      const std::size_t b = tournament(pop, rng);
      auto [c1, c2] = detail::vary(problem, cfg, pop[a].genome, pop[b].genome, rng);
      children[2 * pair] = std::move(c1);
      children[2 * pair + 1] = std::move(c2);
    }
    const auto objs = detail::evaluate_all(problem, children, opts.jobs, identity);

    std::vector<Individual> merged = std::move(pop);
    for (std::size_t i = 0; i < n; ++i) merged.push_back({std::move(children[i]), objs[i], -1, 0.0, gen});
    pop = environmental_selection(std::move(merged), n);
    assign_rank_and_crowding(pop);
    record(gen);
  }

  std::vector<ObjectiveVector> pts;
  for (const auto& ind : pop) pts.push_back(*ind.objectives);
  for (std::size_t i : metrics::pareto_filter_indices(pts)) {
    result.members.push_back({pop[i].genome, *pop[i].objectives, pop[i].generation, result.phase});
  }
  std::stable_sort(result.members.begin(), result.members.end(),
                   [](const FrontMember& x, const FrontMember& y) { return x.objectives.f1 < y.objectives.f1; });
  return result;
}

}  // namespace evoprune::moea
