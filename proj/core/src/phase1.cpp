#include "evoprune/phase1.hpp"

#include <algorithm>

#include "evoprune/moea/nsga2.hpp"

namespace evoprune::phase1 {

ThresholdGenome ThresholdGenome::repaired(double a, double b) noexcept {
  return a <= b ? ThresholdGenome{a, b} : ThresholdGenome{b, a};
}

ThresholdProblem::ThresholdProblem(std::shared_ptr<const nn::Network> base,
                                   std::shared_ptr<const data::LabeledSet> eval_set)
    : base_(std::move(base)), eval_set_(std::move(eval_set)) {
  if (!base_ || !eval_set_) throw InvalidSpecError("phase 1 needs a base network and an evaluation set");
  base_->validate();
  if (eval_set_->empty()) throw InvalidSpecError("phase 1 evaluation set is empty");
  if (nn::nonzero_count(*base_) == 0) throw InvalidSpecError("base network has no nonzero prunable weights");
  const auto [lo, hi] = nn::prunable_weight_range(*base_);
  bounds_ = std::make_shared<const moea::BoundsList>(2, moea::Bounds{lo, hi});
}

ObjectiveVector ThresholdProblem::evaluate(const ThresholdGenome& g) const {
  const nn::Network pruned = nn::apply_threshold(*base_, g.th1, g.th2);
  return {static_cast<double>(nn::nonzero_count(pruned)), 1.0 - nn::accuracy(pruned, *eval_set_)};
}

ObjectiveVector ThresholdProblem::evaluate(const moea::Genome& genome) const {
  const auto& v = std::get<moea::Continuous>(genome).values;
  return evaluate(ThresholdGenome::repaired(v.at(0), v.at(1)));
}

ObjectiveVector ThresholdProblem::objective_scale() const {
  return {static_cast<double>(nn::nonzero_count(*base_)), 1.0};
}

std::unique_ptr<ThresholdProblem> make_phase1_problem(const nn::Network& base, const data::LabeledSet& eval_set) {
  return std::make_unique<ThresholdProblem>(std::make_shared<const nn::Network>(base),
                                            std::make_shared<const data::LabeledSet>(eval_set));
}

moea::ParetoFront run_phase1(const nn::Network& base, const data::LabeledSet& eval_set, const moea::EAConfig& cfg,
                             const moea::RunOptions& opts) {
  const auto problem = make_phase1_problem(base, eval_set);
  moea::ParetoFront front = moea::nsga2_run(*problem, cfg, opts);
  front.phase = "phase1";
  for (auto& m : front.members) {
    auto& v = std::get<moea::Continuous>(m.genome).values;
    const auto g = ThresholdGenome::repaired(v[0], v[1]);
    v = {g.th1, g.th2};
    m.origin = front.phase;
  }
  return front;
}

std::vector<ThresholdSolution> rescore(const moea::ParetoFront& front, const nn::Network& base,
                                       const data::LabeledSet& val_set) {
  std::vector<ThresholdSolution> out;
  out.reserve(front.size());
  for (const auto& m : front.members) {
    const auto& v = std::get<moea::Continuous>(m.genome).values;
    const auto g = ThresholdGenome::repaired(v.at(0), v.at(1));
    const nn::Network pruned = nn::apply_threshold(base, g.th1, g.th2);
    out.push_back({g.th1, g.th2, static_cast<std::int64_t>(m.objectives.f1), m.objectives.f2,
                   1.0 - nn::accuracy(pruned, val_set), front.seed, m.generation});
  }
  return out;
}

}  // namespace evoprune::phase1
