#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evoprune/bitmask.hpp"
#include "evoprune/data/dataset.hpp"
#include "evoprune/moea/config.hpp"
#include "evoprune/moea/front.hpp"
#include "evoprune/moea/problem.hpp"
#include "evoprune/nn/network.hpp"
#include "evoprune/phase1.hpp"
#include "evoprune/rng.hpp"

namespace evoprune::phase2 {

// ---------------------------------------------------------------------------
// Anchors and corridor

struct AnchorRule {
  double delta_acc = 0.01;   // heavy: largest f1 with f2 <= best + delta_acc
  double delta_loss = 0.05;  // light: smallest f1 with f2 <= best + delta_loss
  /// Explicit (heavy, light) indices into the Phase-1 solution list.
  std::optional<std::pair<std::size_t, std::size_t>> override_indices;
};

struct AnchorPair {
  std::size_t heavy = 0;
  std::size_t light = 0;
};

/// Picks anchors by validation error (f2_val). With exactly two solutions the
/// lower-error one is heavy. Throws AnchorSelectionError (with a listing of
/// the front) unless heavy.f1 > light.f1.
AnchorPair select_anchors(std::span<const phase1::ThresholdSolution> p1, const AnchorRule& rule);

struct Corridor {
  nn::Network heavy;                 // base model thresholded by the heavy anchor
  std::int64_t heavy_nonzeros = 0;   // N_h
  std::int64_t light_nonzeros = 0;   // N_l
  int bins = 5;
  int per_bin = 10;

  void validate() const;
  /// Inclusive target-count range of bin b.
  std::pair<std::int64_t, std::int64_t> bin_range(int b) const;
};

Corridor make_corridor(const nn::Network& base, const phase1::ThresholdSolution& heavy,
                       const phase1::ThresholdSolution& light, int bins, int population);

// ---------------------------------------------------------------------------
// Importance-guided initialization

struct LambdaRange {
  double alpha = 0.2;
  double beta = 0.6;
};

struct ImportanceInitConfig {
  double sparsity_threshold = 0.2;  // S
  /// Layers never pruned at initialization (L_n). Unset means the first
  /// prunable layer of the network.
  std::optional<std::set<std::string>> excluded_layers;
  LambdaRange default_range;
  std::map<std::string, LambdaRange> layer_ranges;
  std::uint64_t seed = 0;

  void validate() const;
  LambdaRange range_for(const std::string& layer) const;
  std::set<std::string> resolved_excluded(const nn::Network& net) const;
};

struct LayerScores {
  std::string layer;
  std::vector<double> scores;  // over the layer's nonzero weights, canonical order
};

/// |w| / max |w| per prunable layer over its nonzero weights. Throws
/// DegenerateLayerError for an all-zero prunable layer.
std::vector<LayerScores> importance_scores(const nn::Network& net);

/// True for excluded layers and layers with sparsity < S: their bits are
/// always retained and never pruned by normalization.
bool layer_forced(const nn::Layer& layer, const ImportanceInitConfig& cfg, const std::set<std::string>& excluded);

/// 0 for forced layers, otherwise a uniform draw from the layer's [alpha, beta].
double layer_lambda(const nn::Layer& layer, const ImportanceInitConfig& cfg, const std::set<std::string>& excluded,
                    Rng& rng);

/// Per-bit view of a network's mask universe.
struct MaskLayout {
  struct Segment {
    std::string layer;
    std::size_t begin = 0;  // first bit
    std::size_t end = 0;    // one past the last bit
    double sparsity = 0.0;
    std::size_t layer_index = 0;
  };
  std::vector<Segment> segments;
  std::vector<double> importance;  // s_j per bit

  std::size_t size() const noexcept { return importance.size(); }
};

/// All-zero prunable layers contribute no bits and get no segment.
MaskLayout build_layout(const nn::Network& net);

/// Importance-weighted sampling before normalization: bit j kept with probability
/// 1 - lambda_layer * (1 - s_j). `forced` marks bits of forced segments.
struct SampledMask {
  BitMask bits;
  std::vector<std::uint8_t> forced;
};
SampledMask sample_mask(const MaskLayout& layout, std::span<const double> segment_lambdas,
                        std::span<const std::uint8_t> segment_forced, Rng& rng);

/// Brings the mask to exactly `target` ones: excess ones with the lowest
/// importance are pruned, missing ones with the highest importance restored;
/// forced bits are never pruned (ties by bit index). If the forced bits alone
/// exceed `target`, the result keeps only the forced bits and a warning is
/// appended.
BitMask normalize_mask(const SampledMask& sampled, std::int64_t target, std::span<const double> importance,
                       std::vector<std::string>* warnings = nullptr);

struct InitResult {
  std::vector<BitMask> masks;     // bin-major order
  std::vector<std::int64_t> targets;
  std::vector<std::string> warnings;
};

/// bins * per_bin masks over the corridor's heavy model.
InitResult smart_init(const Corridor& corridor, const ImportanceInitConfig& cfg);

// ---------------------------------------------------------------------------
// Binary search

enum class Engine { Nsga2, Moead };
std::string to_string(Engine e);
Engine parse_engine(const std::string& name);

/// Masks over the heavy model's nonzero prunable weights, scored as
/// (nonzero_count, 1 - accuracy(eval_set)).
class MaskProblem final : public moea::Problem {
 public:
  MaskProblem(std::shared_ptr<const nn::Network> heavy, std::shared_ptr<const data::LabeledSet> eval_set);

  moea::GenomeKind kind() const override { return moea::GenomeKind::Binary; }
  std::size_t genome_length() const override { return layout_.size(); }
  ObjectiveVector evaluate(const moea::Genome& genome) const override;
  ObjectiveVector objective_scale() const override;
  const std::vector<double>* bit_importance() const override { return &layout_.importance; }
  std::optional<std::vector<moea::Genome>> initial_population(std::size_t count, std::uint64_t seed) const override;

  ObjectiveVector evaluate(const BitMask& mask) const;

  /// Installs smart_init as the population seeding hook.
  void set_initializer(Corridor corridor, ImportanceInitConfig cfg);
  const std::vector<std::string>& init_warnings() const noexcept { return init_warnings_; }

 private:
  std::shared_ptr<const nn::Network> heavy_;
  std::shared_ptr<const data::LabeledSet> eval_set_;
  MaskLayout layout_;
  std::optional<std::pair<Corridor, ImportanceInitConfig>> init_;
  mutable std::vector<std::string> init_warnings_;
};

std::unique_ptr<MaskProblem> make_phase2_problem(const nn::Network& heavy, const data::LabeledSet& eval_set);

moea::ParetoFront run_phase2(const Corridor& corridor, const data::LabeledSet& eval_set, const moea::EAConfig& cfg,
                             const ImportanceInitConfig& icfg, Engine engine, const moea::RunOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr);

struct MaskSolution {
  BitMask mask;
  std::int64_t f1 = 0;
  double f2_opt = 0.0;
  double f2_val = 0.0;
  std::int64_t popcount = 0;
  std::string engine;
  std::uint64_t seed = 0;
  int generation = 0;
};

std::vector<MaskSolution> rescore(const moea::ParetoFront& front, const nn::Network& heavy,
                                  const data::LabeledSet& val_set, Engine engine);

}  // namespace evoprune::phase2
