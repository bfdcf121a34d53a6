#include "evoprune/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "evoprune/moea/moead.hpp"
#include "evoprune/moea/nsga2.hpp"

namespace evoprune::phase2 {

namespace {

std::string listing(std::span<const phase1::ThresholdSolution> p1) {
  std::ostringstream out;
  out << "\n  idx        f1       f2_val       f2_opt";
  char buf[128];
  for (std::size_t i = 0; i < p1.size(); ++i) {
    std::snprintf(buf, sizeof buf, "\n  %3zu %9lld %12.6f %12.6f", i, static_cast<long long>(p1[i].f1), p1[i].f2_val,
                  p1[i].f2_opt);
    out << buf;
  }
  return out.str();
}

}  // namespace

AnchorPair select_anchors(std::span<const phase1::ThresholdSolution> p1, const AnchorRule& rule) {
  if (p1.size() < 2) throw AnchorSelectionError("need at least 2 Phase-1 solutions, have " + std::to_string(p1.size()) + listing(p1));

  AnchorPair pair;
  if (rule.override_indices) {
    pair = {rule.override_indices->first, rule.override_indices->second};
    if (pair.heavy >= p1.size() || pair.light >= p1.size()) {
      throw AnchorSelectionError("anchor override index out of range" + listing(p1));
    }
  } else if (p1.size() == 2) {
    const bool first_heavy = p1[0].f2_val < p1[1].f2_val || (p1[0].f2_val == p1[1].f2_val && p1[0].f1 > p1[1].f1);
    pair = first_heavy ? AnchorPair{0, 1} : AnchorPair{1, 0};
  } else {
    double best = p1[0].f2_val;
    for (const auto& s : p1) best = std::min(best, s.f2_val);
    std::optional<std::size_t> heavy, light;
    for (std::size_t i = 0; i < p1.size(); ++i) {
      if (p1[i].f2_val <= best + rule.delta_acc && (!heavy || p1[i].f1 > p1[*heavy].f1)) heavy = i;
      if (p1[i].f2_val <= best + rule.delta_loss && (!light || p1[i].f1 < p1[*light].f1)) light = i;
    }
    pair = {*heavy, *light};
  }
  if (!(p1[pair.heavy].f1 > p1[pair.light].f1)) {
    throw AnchorSelectionError("heavy anchor (index " + std::to_string(pair.heavy) +
                               ") must retain more weights than light anchor (index " + std::to_string(pair.light) +
                               ")" + listing(p1));
  }
  return pair;
}

void Corridor::validate() const {
  if (bins < 1) throw CorridorError("bins must be >= 1");
  if (per_bin < 1) throw CorridorError("per_bin must be >= 1");
  if (light_nonzeros >= heavy_nonzeros) {
    throw CorridorError("light anchor nonzeros (" + std::to_string(light_nonzeros) + ") must be below heavy (" +
                        std::to_string(heavy_nonzeros) + ")");
  }
  if (light_nonzeros < 0) throw CorridorError("negative light anchor count");
  if (nn::nonzero_count(heavy) != heavy_nonzeros) throw CorridorError("heavy model does not match N_h");
}

std::pair<std::int64_t, std::int64_t> Corridor::bin_range(int b) const {
  const std::int64_t span = heavy_nonzeros - light_nonzeros;
  const std::int64_t lo = light_nonzeros + span * b / bins;
  std::int64_t hi = light_nonzeros + span * (b + 1) / bins;
  if (b + 1 < bins) hi -= 1;
  return {lo, std::max(lo, hi)};
}

Corridor make_corridor(const nn::Network& base, const phase1::ThresholdSolution& heavy,
                       const phase1::ThresholdSolution& light, int bins, int population) {
  if (bins < 1 || population % bins != 0) {
    throw InvalidSpecError("population (" + std::to_string(population) + ") must be a multiple of bins (" +
                           std::to_string(bins) + ")");
  }
  Corridor c;
  c.heavy = nn::apply_threshold(base, heavy.th1, heavy.th2);
  c.heavy_nonzeros = nn::nonzero_count(c.heavy);
  c.light_nonzeros = light.f1;
  c.bins = bins;
  c.per_bin = population / bins;
  c.validate();
  return c;
}

void ImportanceInitConfig::validate() const {
  if (!(sparsity_threshold >= 0.0 && sparsity_threshold <= 1.0)) throw InvalidSpecError("S must lie in [0, 1]");
  auto check = [](const LambdaRange& r, const std::string& what) {
    if (!(r.alpha >= 0.0 && r.beta <= 1.0 && r.alpha <= r.beta)) {
      throw InvalidSpecError("lambda range for " + what + " must satisfy 0 <= alpha <= beta <= 1");
    }
  };
  check(default_range, "default");
  for (const auto& [name, r] : layer_ranges) check(r, name);
}

LambdaRange ImportanceInitConfig::range_for(const std::string& layer) const {
  auto it = layer_ranges.find(layer);
  return it == layer_ranges.end() ? default_range : it->second;
}

std::set<std::string> ImportanceInitConfig::resolved_excluded(const nn::Network& net) const {
  if (excluded_layers) return *excluded_layers;
  for (const auto& l : net.layers) {
    if (l.prunable) return {l.name};
  }
  return {};
}

std::vector<LayerScores> importance_scores(const nn::Network& net) {
  std::vector<LayerScores> out;
  for (const auto& l : net.layers) {
    if (!l.prunable) continue;
    double mx = 0.0;
    for (double w : l.weights.values) mx = std::max(mx, std::abs(w));
    if (mx == 0.0) throw DegenerateLayerError(l.name);
    LayerScores s{l.name, {}};
    for (double w : l.weights.values) {
      if (w != 0.0) s.scores.push_back(std::abs(w) / mx);
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool layer_forced(const nn::Layer& layer, const ImportanceInitConfig& cfg, const std::set<std::string>& excluded) {
  return excluded.contains(layer.name) || layer.sparsity() < cfg.sparsity_threshold;
}

double layer_lambda(const nn::Layer& layer, const ImportanceInitConfig& cfg, const std::set<std::string>& excluded,
                    Rng& rng) {
  if (layer_forced(layer, cfg, excluded)) return 0.0;
  const auto r = cfg.range_for(layer.name);
  return r.alpha + (r.beta - r.alpha) * uniform01(rng);
}

MaskLayout build_layout(const nn::Network& net) {
  MaskLayout layout;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& l = net.layers[k];
    if (!l.prunable) continue;
    double mx = 0.0;
    for (double w : l.weights.values) mx = std::max(mx, std::abs(w));
    if (mx == 0.0) continue;  // degenerate layer: no bits
    MaskLayout::Segment seg{l.name, layout.importance.size(), 0, l.sparsity(), k};
    for (double w : l.weights.values) {
      if (w != 0.0) layout.importance.push_back(std::abs(w) / mx);
    }
    seg.end = layout.importance.size();
    layout.segments.push_back(std::move(seg));
  }
  return layout;
}

SampledMask sample_mask(const MaskLayout& layout, std::span<const double> segment_lambdas,
                        std::span<const std::uint8_t> segment_forced, Rng& rng) {
  if (segment_lambdas.size() != layout.segments.size() || segment_forced.size() != layout.segments.size()) {
    throw ShapeError("one lambda and one forced flag per layout segment expected");
  }
  SampledMask out{BitMask(layout.size(), true), std::vector<std::uint8_t>(layout.size(), 0)};
  for (std::size_t s = 0; s < layout.segments.size(); ++s) {
    const auto& seg = layout.segments[s];
    const double lambda = segment_lambdas[s];
    for (std::size_t j = seg.begin; j < seg.end; ++j) {
      if (segment_forced[s]) {
        out.forced[j] = 1;
        continue;
      }
      const double p_prune = lambda * (1.0 - layout.importance[j]);
      out.bits.set(j, !(uniform01(rng) < p_prune));
    }
  }
  return out;
}

BitMask normalize_mask(const SampledMask& sampled, std::int64_t target, std::span<const double> importance,
                       std::vector<std::string>* warnings) {
  BitMask mask = sampled.bits;
  const std::size_t n = mask.size();
  if (importance.size() != n || sampled.forced.size() != n) throw ShapeError("normalization inputs differ in length");
  target = std::clamp<std::int64_t>(target, 0, static_cast<std::int64_t>(n));
  auto count = static_cast<std::int64_t>(mask.popcount());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (count > target) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return importance[a] < importance[b]; });
    for (std::size_t j : order) {
      if (count == target) break;
      if (mask[j] && !sampled.forced[j]) {
        mask.set(j, false);
        --count;
      }
    }
    if (count > target && warnings) {
      warnings->push_back("forced bits (" + std::to_string(count) + ") exceed target " + std::to_string(target) +
                          "; using the minimum feasible count");
    }
  } else if (count < target) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
    for (std::size_t j : order) {
      if (count == target) break;
      if (!mask[j]) {
        mask.set(j, true);
        ++count;
      }
    }
  }
  return mask;
}

InitResult smart_init(const Corridor& corridor, const ImportanceInitConfig& cfg) {
  corridor.validate();
  cfg.validate();
  const MaskLayout layout = build_layout(corridor.heavy);
  const auto excluded = cfg.resolved_excluded(corridor.heavy);

  InitResult out;
  std::vector<double> lambdas(layout.segments.size());
  std::vector<std::uint8_t> forced(layout.segments.size());
  for (std::size_t s = 0; s < layout.segments.size(); ++s) {
    forced[s] = layer_forced(corridor.heavy.layers[layout.segments[s].layer_index], cfg, excluded) ? 1 : 0;
  }
  for (int b = 0; b < corridor.bins; ++b) {
    const auto [lo, hi] = corridor.bin_range(b);
    for (int j = 0; j < corridor.per_bin; ++j) {
      Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(j)));
      const std::int64_t target = uniform_int(rng, lo, hi);
      for (std::size_t s = 0; s < layout.segments.size(); ++s) {
        lambdas[s] = layer_lambda(corridor.heavy.layers[layout.segments[s].layer_index], cfg, excluded, rng);
      }
      const SampledMask sampled = sample_mask(layout, lambdas, forced, rng);
      out.masks.push_back(normalize_mask(sampled, target, layout.importance, &out.warnings));
      out.targets.push_back(target);
    }
  }
  return out;
}

std::string to_string(Engine e) { return e == Engine::Nsga2 ? "nsga2" : "moead"; }

Engine parse_engine(const std::string& name) {
  if (name == "nsga2") return Engine::Nsga2;
  if (name == "moead") return Engine::Moead;
  throw ConfigError("unknown engine '" + name + "' (expected nsga2 or moead)");
}

MaskProblem::MaskProblem(std::shared_ptr<const nn::Network> heavy, std::shared_ptr<const data::LabeledSet> eval_set)
    : heavy_(std::move(heavy)), eval_set_(std::move(eval_set)) {
  if (!heavy_ || !eval_set_) throw InvalidSpecError("phase 2 needs a heavy model and an evaluation set");
  heavy_->validate();
  if (eval_set_->empty()) throw InvalidSpecError("phase 2 evaluation set is empty");
  layout_ = build_layout(*heavy_);
}

ObjectiveVector MaskProblem::evaluate(const BitMask& mask) const {
  const nn::Network masked = nn::apply_mask(*heavy_, mask);
  return {static_cast<double>(nn::nonzero_count(masked)), 1.0 - nn::accuracy(masked, *eval_set_)};
}

ObjectiveVector MaskProblem::evaluate(const moea::Genome& genome) const {
  return evaluate(std::get<moea::Binary>(genome));
}

ObjectiveVector MaskProblem::objective_scale() const {
  return {static_cast<double>(std::max<std::size_t>(1, layout_.size())), 1.0};
}

void MaskProblem::set_initializer(Corridor corridor, ImportanceInitConfig cfg) {
  init_.emplace(std::move(corridor), std::move(cfg));
}

std::optional<std::vector<moea::Genome>> MaskProblem::initial_population(std::size_t count, std::uint64_t) const {
  if (!init_) return std::nullopt;
  const auto& [corridor, cfg] = *init_;
  if (count != static_cast<std::size_t>(corridor.bins * corridor.per_bin)) {
    throw ContractViolation("population " + std::to_string(count) + " != bins * per_bin");
  }
  InitResult init = smart_init(corridor, cfg);
  init_warnings_ = std::move(init.warnings);
  std::vector<moea::Genome> out;
  out.reserve(count);
  for (auto& m : init.masks) out.emplace_back(std::move(m));
  return out;
}

std::unique_ptr<MaskProblem> make_phase2_problem(const nn::Network& heavy, const data::LabeledSet& eval_set) {
  return std::make_unique<MaskProblem>(std::make_shared<const nn::Network>(heavy),
                                       std::make_shared<const data::LabeledSet>(eval_set));
}

moea::ParetoFront run_phase2(const Corridor& corridor, const data::LabeledSet& eval_set, const moea::EAConfig& cfg,
                             const ImportanceInitConfig& icfg, Engine engine, const moea::RunOptions& opts,
                             std::vector<std::string>* warnings) {
  corridor.validate();
  if (cfg.population != corridor.bins * corridor.per_bin) {
    throw InvalidSpecError("phase 2 population must equal bins * per_bin");
  }
  auto problem = make_phase2_problem(corridor.heavy, eval_set);
  problem->set_initializer(corridor, icfg);
  moea::ParetoFront front = engine == Engine::Nsga2 ? moea::nsga2_run(*problem, cfg, opts)
                                                    : moea::moead_run(*problem, cfg, opts);
  front.phase = "phase2-" + to_string(engine);
  for (auto& m : front.members) m.origin = front.phase;
  if (warnings) warnings->insert(warnings->end(), problem->init_warnings().begin(), problem->init_warnings().end());
  return front;
}

std::vector<MaskSolution> rescore(const moea::ParetoFront& front, const nn::Network& heavy,
                                  const data::LabeledSet& val_set, Engine engine) {
  std::vector<MaskSolution> out;
  out.reserve(front.size());
  for (const auto& m : front.members) {
    const auto& mask = std::get<moea::Binary>(m.genome);
    const nn::Network masked = nn::apply_mask(heavy, mask);
    out.push_back({mask, static_cast<std::int64_t>(m.objectives.f1), m.objectives.f2,
                   1.0 - nn::accuracy(masked, val_set), static_cast<std::int64_t>(mask.popcount()), to_string(engine),
                   front.seed, m.generation});
  }
  return out;
}

}  // namespace evoprune::phase2
