#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "evoprune/moea/genome.hpp"
#include "evoprune/objectives.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::moea {

/// Latin hypercube sample of n points: in every dimension each of the n
/// equal-width strata holds exactly one point.
std::vector<Continuous> lhs_sample(std::size_t n, std::shared_ptr<const BoundsList> bounds, std::uint64_t seed);

/// One-gene SBX for a given uniform draw u in [0,1). Spread factor
/// beta = (2u)^(1/(eta+1)) for u <= 0.5, else (1/(2(1-u)))^(1/(eta+1));
/// children are clipped to [lo, hi]. u = 0.5 gives beta = 1, i.e. the parents.
std::pair<double, double> sbx_gene(double x1, double x2, const Bounds& b, double eta, double u);

/// Simulated binary crossover. With probability `prob` every gene is
/// recombined, otherwise the children are copies of the parents.
std::pair<Continuous, Continuous> sbx_crossover(const Continuous& p1, const Continuous& p2, double eta, double prob,
                                                Rng& rng);

/// Bounded polynomial mutation of one gene for uniform draw u.
double polynomial_gene(double x, const Bounds& b, double eta, double u);

/// Each gene mutated independently with probability `prob`.
Continuous polynomial_mutation(const Continuous& g, double eta, double prob, Rng& rng);

/// With probability `prob`, every position is swapped between the children
/// with chance 1/2; otherwise the children copy the parents.
std::pair<Binary, Binary> uniform_crossover(const Binary& p1, const Binary& p2, double prob, Rng& rng);

/// Each bit flipped independently with probability `prob`.
Binary bitflip_mutation(const Binary& g, double prob, Rng& rng);

/// Importance-weighted flips: a retained bit j flips with min(1, 2 prob (1 - s_j)),
/// a pruned bit with min(1, 2 prob s_j). Uniform s = 0.5 reduces to bitflip_mutation.
Binary importance_bitflip_mutation(const Binary& g, std::span<const double> importance, double prob, Rng& rng);

/// Tchebycheff scalarization max_i weight_i * |f_i - ideal_i|.
double tchebycheff(const ObjectiveVector& weight, const ObjectiveVector& f, const ObjectiveVector& ideal) noexcept;

}  // namespace evoprune::moea
