#include "evoprune/moea/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evoprune/error.hpp"

namespace evoprune::moea {

std::vector<Continuous> lhs_sample(std::size_t n, std::shared_ptr<const BoundsList> bounds, std::uint64_t seed) {
  if (n == 0) return {};
  if (!bounds) throw InvalidSpecError("LHS needs bounds");
  Rng rng = make_rng(seed);
  const std::size_t dims = bounds->size();
  std::vector<Continuous> out(n);
  for (auto& g : out) {
    g.values.resize(dims);
    g.bounds = bounds;
  }
  std::vector<std::size_t> strata(n);
  for (std::size_t d = 0; d < dims; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const Bounds& b = (*bounds)[d];
    const double width = (b.hi - b.lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = b.lo + (static_cast<double>(strata[i]) + uniform01(rng)) * width;
      out[i].values[d] = std::clamp(v, b.lo, b.hi);
    }
  }
  return out;
}

std::pair<double, double> sbx_gene(double x1, double x2, const Bounds& b, double eta, double u) {
  const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                               : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
  const double mid = 0.5 * (x1 + x2);
  const double half = 0.5 * (x2 - x1);
  return {std::clamp(mid - beta * half, b.lo, b.hi), std::clamp(mid + beta * half, b.lo, b.hi)};
}

std::pair<Continuous, Continuous> sbx_crossover(const Continuous& p1, const Continuous& p2, double eta, double prob,
                                                Rng& rng) {
  if (p1.values.size() != p2.values.size()) throw ShapeError("SBX parents differ in length");
  std::pair<Continuous, Continuous> kids{p1, p2};
  if (uniform01(rng) >= prob) return kids;
  for (std::size_t i = 0; i < p1.values.size(); ++i) {
    auto [a, b] = sbx_gene(p1.values[i], p2.values[i], p1.bound(i), eta, uniform01(rng));
    kids.first.values[i] = a;
    kids.second.values[i] = b;
  }
  return kids;
}

double polynomial_gene(double x, const Bounds& b, double eta, double u) {
  const double range = b.hi - b.lo;
  if (range <= 0.0) return b.lo;
  const double d1 = (x - b.lo) / range;
  const double d2 = (b.hi - x) / range;
  const double pw = 1.0 / (eta + 1.0);
  double dq;
  if (u < 0.5) {
    const double xy = 1.0 - d1;
    const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
    dq = std::pow(val, pw) - 1.0;
  } else {
    const double xy = 1.0 - d2;
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
    dq = 1.0 - std::pow(val, pw);
  }
  return std::clamp(x + dq * range, b.lo, b.hi);
}

Continuous polynomial_mutation(const Continuous& g, double eta, double prob, Rng& rng) {
  Continuous out = g;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (uniform01(rng) < prob) out.values[i] = polynomial_gene(out.values[i], g.bound(i), eta, uniform01(rng));
  }
  return out;
}

std::pair<Binary, Binary> uniform_crossover(const Binary& p1, const Binary& p2, double prob, Rng& rng) {
  if (p1.size() != p2.size()) throw ShapeError("uniform crossover parents differ in length");
  std::pair<Binary, Binary> kids{p1, p2};
  if (uniform01(rng) >= prob) return kids;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (rng() >> 63) {
      kids.first.set(i, p2[i]);
      kids.second.set(i, p1[i]);
    }
  }
  return kids;
}

Binary bitflip_mutation(const Binary& g, double prob, Rng& rng) {
  Binary out = g;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (uniform01(rng) < prob) out.flip(i);
  }
  return out;
}

Binary importance_bitflip_mutation(const Binary& g, std::span<const double> importance, double prob, Rng& rng) {
  if (importance.size() != g.size()) throw ShapeError("importance vector does not match mask length");
  Binary out = g;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double s = importance[i];
    const double p = std::min(1.0, 2.0 * prob * (g[i] ? 1.0 - s : s));
    if (uniform01(rng) < p) out.flip(i);
  }
  return out;
}

double tchebycheff(const ObjectiveVector& weight, const ObjectiveVector& f, const ObjectiveVector& ideal) noexcept {
  return std::max(weight.f1 * std::abs(f.f1 - ideal.f1), weight.f2 * std::abs(f.f2 - ideal.f2));
}

}  // namespace evoprune::moea
