#include <benchmark/benchmark.h>

#include <vector>

#include "evoprune/data/dataset.hpp"
#include "evoprune/metrics.hpp"
#include "evoprune/moea/sorting.hpp"
#include "evoprune/nn/network.hpp"
#include "evoprune/phase1.hpp"
#include "evoprune/phase2.hpp"
#include "evoprune/rng.hpp"

using namespace evoprune;

namespace {

std::vector<ObjectiveVector> random_points(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<ObjectiveVector> pts(n);
  for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
  return pts;
}

struct Model {
  nn::Network net;
  data::LabeledSet eval;
};

const Model& model() {
  static const Model m = [] {
    const auto all = data::generate_blobs(4, 8, 250, 1.0, 1);
    data::SplitSpec spec;
    spec.seed = 2;
    auto split = data::stratified_split(all, spec);
    nn::TrainConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.epochs = 5;
    const std::vector<std::size_t> widths{8, 64, 96, 128, 4};
    return Model{nn::train(nn::init_network(widths, 3), split.train, cfg), split.opt};
  }();
  return m;
}

}  // namespace

static void BM_NondominatedSort(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(moea::fast_nondominated_sort(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedSort)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

static void BM_Hypervolume(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::hypervolume2(pts, NormalizationSpec{1}));
}
BENCHMARK(BM_Hypervolume)->Range(16, 4096);

static void BM_Forward(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(m.net, m.eval.features));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.eval.size()));
}
BENCHMARK(BM_Forward);

static void BM_ThresholdEvaluation(benchmark::State& state) {
  const auto& m = model();
  const auto problem = phase1::make_phase1_problem(m.net, m.eval);
  const auto [lo, hi] = nn::prunable_weight_range(m.net);
  const moea::Genome g = moea::Continuous{{0.1 * lo, 0.1 * hi}, problem->bounds()};
  for (auto _ : state) benchmark::DoNotOptimize(problem->evaluate(g));
}
BENCHMARK(BM_ThresholdEvaluation);

static void BM_MaskEvaluation(benchmark::State& state) {
  const auto& m = model();
  const auto problem = phase2::make_phase2_problem(m.net, m.eval);
  BitMask mask(problem->genome_length(), true);
  Rng rng = make_rng(13);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set(i, uniform01(rng) < 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(problem->evaluate(mask));
}
BENCHMARK(BM_MaskEvaluation);
BENCHMARK_MAIN();
