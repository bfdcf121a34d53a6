#pragma once

// Helpers shared by the NSGA-II and MOEA/D runners.

#include <cmath>
#include <limits>

#include "evoprune/error.hpp"
#include "evoprune/metrics.hpp"
#include "evoprune/moea/config.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/moea/operators.hpp"
#include "evoprune/moea/parallel.hpp"
#include "evoprune/moea/problem.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::moea::detail {

// Stream ids for derive_seed(cfg.seed, generation, stream).
inline constexpr std::uint64_t kInitStream = 0xffff'ffffULL;

inline std::vector<Genome> initial_genomes(const Problem& problem, std::size_t n, std::uint64_t seed) {
  const std::uint64_t init_seed = derive_seed(seed, 0, kInitStream);
  if (auto seeded = problem.initial_population(n, init_seed)) {
    if (seeded->size() != n) throw ContractViolation("initializer returned the wrong population size");
    for (const auto& g : *seeded) {
      if (length_of(g) != problem.genome_length() || kind_of(g) != problem.kind()) {
        throw ContractViolation("initializer returned a genome of the wrong kind or length");
      }
    }
    return std::move(*seeded);
  }
  std::vector<Genome> out;
  out.reserve(n);
  if (problem.kind() == GenomeKind::Continuous) {
    for (auto& c : lhs_sample(n, problem.bounds(), init_seed)) out.emplace_back(std::move(c));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = make_rng(derive_seed(init_seed, 1, i));
      Binary bits(problem.genome_length());
      for (std::size_t j = 0; j < bits.size(); ++j) bits.set(j, rng() >> 63);
      out.emplace_back(std::move(bits));
    }
  }
  return out;
}

// Variation for one parent pair; continuous genomes use SBX + polynomial
// mutation, binary genomes uniform crossover + bit-flip.
inline std::pair<Genome, Genome> vary(const Problem& problem, const EAConfig& cfg, const Genome& a, const Genome& b,
                                      Rng& rng) {
  if (kind_of(a) == GenomeKind::Continuous) {
    auto [c1, c2] = sbx_crossover(std::get<Continuous>(a), std::get<Continuous>(b), cfg.sbx_eta, cfg.crossover_prob, rng);
    return {polynomial_mutation(c1, cfg.poly_eta, cfg.mutation_prob, rng),
            polynomial_mutation(c2, cfg.poly_eta, cfg.mutation_prob, rng)};
  }
  auto [c1, c2] = uniform_crossover(std::get<Binary>(a), std::get<Binary>(b), cfg.crossover_prob, rng);
  const auto* importance = cfg.importance_mutation ? problem.bit_importance() : nullptr;
  if (importance) {
    return {importance_bitflip_mutation(c1, *importance, cfg.mutation_prob, rng),
            importance_bitflip_mutation(c2, *importance, cfg.mutation_prob, rng)};
  }
  return {bitflip_mutation(c1, cfg.mutation_prob, rng), bitflip_mutation(c2, cfg.mutation_prob, rng)};
}

template <typename Decode>
std::vector<ObjectiveVector> evaluate_all(const Problem& problem, const std::vector<Genome>& genomes, std::size_t jobs,
                                          Decode decode) {
  std::vector<ObjectiveVector> out(genomes.size());
  parallel_for(genomes.size(), jobs, [&](std::size_t i) {
    const ObjectiveVector v = problem.evaluate(decode(genomes[i]));
    if (!std::isfinite(v.f1) || !std::isfinite(v.f2)) {
      throw ContractViolation("non-finite objectives for individual " + std::to_string(i));
    }
    out[i] = v;
  });
  return out;
}

inline GenerationRecord make_record(int generation, const std::vector<ObjectiveVector>& pts, ObjectiveVector best,
                                    const RunOptions& opts) {
  GenerationRecord r;
  r.generation = generation;
  r.best_f1 = best.f1;
  r.best_f2 = best.f2;
  r.hypervolume = opts.trace_normalization ? metrics::hypervolume2(pts, *opts.trace_normalization)
                                           : std::numeric_limits<double>::quiet_NaN();
  return r;
}

inline ObjectiveVector componentwise_min(const std::vector<ObjectiveVector>& pts) {
  ObjectiveVector m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    m.f1 = std::min(m.f1, p.f1);
    m.f2 = std::min(m.f2, p.f2);
  }
  return m;
}

}  // namespace evoprune::moea::detail
