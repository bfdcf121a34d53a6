#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "evoprune/data/dataset.hpp"
#include "evoprune/moea/config.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/moea/problem.hpp"
#include "evoprune/nn/network.hpp"

namespace evoprune::phase1 {

/// Repaired threshold pair, th1 <= th2.
struct ThresholdGenome {
  double th1 = 0.0;
  double th2 = 0.0;

  /// Sorts the pair.
  static ThresholdGenome repaired(double a, double b) noexcept;
};

/// Global interval pruning of a fixed base model: a 2-gene genome in
/// [w_min, w_max]^2 is sorted into (th1, th2), the base is thresholded and
/// scored as (nonzero_count, 1 - accuracy(eval_set)).
class ThresholdProblem final : public moea::Problem {
 public:
  ThresholdProblem(std::shared_ptr<const nn::Network> base, std::shared_ptr<const data::LabeledSet> eval_set);

  moea::GenomeKind kind() const override { return moea::GenomeKind::Continuous; }
  std::size_t genome_length() const override { return 2; }
  std::shared_ptr<const moea::BoundsList> bounds() const override { return bounds_; }
  ObjectiveVector evaluate(const moea::Genome& genome) const override;
  ObjectiveVector objective_scale() const override;

  ObjectiveVector evaluate(const ThresholdGenome& g) const;
  const nn::Network& base() const noexcept { return *base_; }

 private:
  std::shared_ptr<const nn::Network> base_;
  std::shared_ptr<const data::LabeledSet> eval_set_;
  std::shared_ptr<const moea::BoundsList> bounds_;
};

std::unique_ptr<ThresholdProblem> make_phase1_problem(const nn::Network& base, const data::LabeledSet& eval_set);

/// NSGA-II over threshold pairs. Members carry repaired genomes and
/// (f1, f2 on eval_set).
moea::ParetoFront run_phase1(const nn::Network& base, const data::LabeledSet& eval_set, const moea::EAConfig& cfg,
                             const moea::RunOptions& opts = {});

/// One exported Phase-1 solution.
struct ThresholdSolution {
  double th1 = 0.0;
  double th2 = 0.0;
  std::int64_t f1 = 0;
  double f2_opt = 0.0;
  double f2_val = 0.0;
  std::uint64_t seed = 0;
  int generation = 0;
};

/// Attaches validation error to every front member.
std::vector<ThresholdSolution> rescore(const moea::ParetoFront& front, const nn::Network& base,
                                       const data::LabeledSet& val_set);

}  // namespace evoprune::phase1
