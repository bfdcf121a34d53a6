#include "evoprune/moea/moead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "engine.hpp"

namespace evoprune::moea {

std::vector<ObjectiveVector> uniform_weights(std::size_t n) {
  if (n < 2) throw InvalidSpecError("need at least 2 weight vectors");
  std::vector<ObjectiveVector> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(n - 1);
    w[k] = {a, 1.0 - a};
  }
  return w;
}

std::vector<std::vector<std::size_t>> neighborhoods(const std::vector<ObjectiveVector>& weights, std::size_t t) {
  if (t > weights.size()) throw InvalidSpecError("neighborhood size exceeds population");
  std::vector<std::vector<std::size_t>> out(weights.size());
  std::vector<std::size_t> order(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::vector<double> dist(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) {
      dist[j] = std::hypot(weights[i].f1 - weights[j].f1, weights[i].f2 - weights[j].f2);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    out[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
  }
  return out;
}

namespace {

// Encodes bits as proxies: 1 -> (0.5, 1], 0 -> [0, 0.5).
Continuous encode_proxy(const Binary& bits, const std::shared_ptr<const BoundsList>& bounds, Rng& rng) {
  Continuous c;
  c.bounds = bounds;
  c.values.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double u = uniform01(rng);
    c.values[i] = bits[i] ? 0.5 + 0.5 * (1.0 - u) : 0.5 * u;
  }
  return c;
}

Binary decode_proxy(const Continuous& c) {
  Binary bits(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i) bits.set(i, c.values[i] > 0.5);
  return bits;
}

struct Archive {
  std::vector<FrontMember> members;

  void offer(const Genome& g, const ObjectiveVector& f, int generation, const std::string& origin) {
    for (const auto& m : members) {
      if (m.objectives == f || dominates(m.objectives, f)) return;
    }
    std::erase_if(members, [&](const FrontMember& m) { return dominates(f, m.objectives); });
    members.push_back({g, f, generation, origin});
  }
};

}  // namespace

ParetoFront moead_run(const Problem& problem, const EAConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.population);
  const auto t = static_cast<std::size_t>(cfg.moead_neighbors);
  if (t > n) throw InvalidSpecError("moead_neighbors (" + std::to_string(t) + ") exceeds population");

  const auto weights = uniform_weights(n);
  const auto hoods = neighborhoods(weights, t);
  const ObjectiveVector scale = problem.objective_scale();
  if (!(scale.f1 > 0.0) || !(scale.f2 > 0.0)) throw ContractViolation("objective scale must be positive");

  const bool proxy = cfg.moead_proxy && problem.kind() == GenomeKind::Binary;
  const auto proxy_bounds = proxy ? std::make_shared<const BoundsList>(problem.genome_length(), Bounds{0.0, 1.0})
                                  : std::shared_ptr<const BoundsList>{};
  // In proxy mode the population holds Continuous genomes; decode() maps them
  // to the problem's bit genomes.
  const auto decode = [proxy](const Genome& g) -> Genome {
    return proxy ? Genome{decode_proxy(std::get<Continuous>(g))} : g;
  };

  std::vector<Genome> pop = detail::initial_genomes(problem, n, cfg.seed);
  if (proxy) {
    Rng rng = make_rng(derive_seed(cfg.seed, 0, detail::kInitStream + 1));
    for (auto& g : pop) g = encode_proxy(std::get<Binary>(g), proxy_bounds, rng);
  }
  std::vector<ObjectiveVector> fit = detail::evaluate_all(problem, pop, opts.jobs, decode);

  ParetoFront result;
  result.phase = "moead";
  result.seed = cfg.seed;
  result.created_at = utc_timestamp();
  result.normalization = opts.trace_normalization;

  Archive archive;
  for (std::size_t i = 0; i < n; ++i) archive.offer(decode(pop[i]), fit[i], 0, result.phase);

  ObjectiveVector ideal = detail::componentwise_min(fit);
  auto scaled = [&](const ObjectiveVector& f) { return ObjectiveVector{f.f1 / scale.f1, f.f2 / scale.f2}; };
  auto g_value = [&](std::size_t sub, const ObjectiveVector& f) {
    return tchebycheff(weights[sub], scaled(f), scaled(ideal));
  };
  auto record = [&](int generation) {
    std::vector<ObjectiveVector> pts;
    for (const auto& m : archive.members) pts.push_back(m.objectives);
    result.trace.push_back(detail::make_record(generation, pts, ideal, opts));
  };
  record(0);

  std::vector<std::size_t> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Genome> children(n);
    for (std::size_t sub = 0; sub < n; ++sub) {
      Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(gen), sub));
      const auto& pool = uniform01(rng) < cfg.moead_mating_prob ? hoods[sub] : everyone;
      const auto m = static_cast<std::int64_t>(pool.size());
      const auto a = static_cast<std::size_t>(uniform_int(rng, 0, m - 1));
      auto b = static_cast<std::size_t>(uniform_int(rng, 0, m - 2));
      if (b >= a) ++b;
      auto kids = detail::vary(problem, cfg, pop[pool[a]], pop[pool[b]], rng);
      children[sub] = std::move(kids.first);
    }
    const auto child_fit = detail::evaluate_all(problem, children, opts.jobs, decode);

    for (std::size_t sub = 0; sub < n; ++sub) {
      const ObjectiveVector& f = child_fit[sub];
      ideal.f1 = std::min(ideal.f1, f.f1);
      ideal.f2 = std::min(ideal.f2, f.f2);
      for (std::size_t j : hoods[sub]) {
        if (g_value(j, f) <= g_value(j, fit[j])) {
          pop[j] = children[sub];
          fit[j] = f;
        }
      }
      archive.offer(decode(children[sub]), f, gen, result.phase);
    }
    record(gen);
  }

  result.members = std::move(archive.members);
  std::stable_sort(result.members.begin(), result.members.end(),
                   [](const FrontMember& x, const FrontMember& y) { return x.objectives.f1 < y.objectives.f1; });
  return result;
}

}  // namespace evoprune::moea
