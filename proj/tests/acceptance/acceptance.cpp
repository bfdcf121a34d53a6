// Acceptance suite: one PASS/FAIL line per criterion A1-A10.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evoprune/error.hpp"
#include "evoprune/metrics.hpp"
#include "evoprune/moea/moead.hpp"
#include "evoprune/moea/nsga2.hpp"
#include "evoprune/moea/operators.hpp"
#include "evoprune/moea/sorting.hpp"
#include "evoprune/nn/checkpoint.hpp"
#include "evoprune/phase2.hpp"
#include "evoprune/pipeline/config.hpp"
#include "evoprune/pipeline/front_io.hpp"
#include "evoprune/pipeline/stages.hpp"
#include "fixtures.hpp"

using namespace evoprune;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kSortSeconds = 5.0;
constexpr double kHvTolerance = 0.01;
constexpr std::size_t kHvSamples = 1000000;
constexpr double kHvSeconds = 30.0;
constexpr double kRetentionTolerance = 0.02;
constexpr double kSchafferSlack = 0.05;
constexpr double kSchafferHvGap = 0.02;
constexpr double kSchafferSeconds = 10.0;
constexpr double kMinBaselineAccuracy = 0.95;
constexpr double kMinReduction = 0.25;
constexpr double kMaxAccuracyDrop = 0.02;
constexpr double kPipelineSeconds = 600.0;
constexpr int kA5Required = 8;
constexpr int kA6Required = 8;
constexpr int kA7Required = 7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome a1_sorting() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(101);
  int mismatches = 0;
  for (int pop = 0; pop < 100; ++pop) {
    std::vector<ObjectiveVector> pts(200);
    // every other population on a coarse grid to force ties and duplicates
    for (auto& p : pts) {
      if (pop % 2 == 0) {
        p = {uniform01(rng), uniform01(rng)};
      } else {
        p = {std::floor(uniform01(rng) * 8), std::floor(uniform01(rng) * 8)};
      }
    }
    const auto expect = testing::brute_force_ranks(pts);
    const auto fronts = moea::fast_nondominated_sort(pts);
    std::vector<int> got(pts.size(), -1);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
      for (auto i : fronts[r]) got[i] = static_cast<int>(r);
    }
    mismatches += got != expect;
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && s < kSortSeconds, fmt("%d/100 populations differ, %.2fs", mismatches, s)};
}

Outcome a2_hypervolume() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(202);
  double worst = 0.0;
  for (int f = 0; f < 50; ++f) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 20);
    std::vector<ObjectiveVector> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
    const auto front = metrics::pareto_filter(pts);
    const double exact = metrics::hypervolume2(front, NormalizationSpec{1});
    const double mc = testing::monte_carlo_hv(front, kHvSamples, 300 + static_cast<std::uint64_t>(f));
    worst = std::max(worst, std::abs(exact - mc));
  }
  const double s = seconds_since(t0);
  return {worst <= kHvTolerance && s < kHvSeconds, fmt("max |exact - MC| = %.5f, %.2fs", worst, s)};
}

Outcome a3_importance() {
  const auto t = testing::make_trained(31);
  const auto layout = phase2::build_layout(t.net);
  // retention statistics on one eligible layer
  const std::size_t target = 1;
  std::vector<double> lambdas(layout.segments.size(), 0.0);
  std::vector<std::uint8_t> forced(layout.segments.size(), 1);
  lambdas[target] = 0.5;
  forced[target] = 0;
  std::vector<int> kept(layout.size(), 0);
  Rng rng = make_rng(32);
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    const auto s = phase2::sample_mask(layout, lambdas, forced, rng);
    for (std::size_t j = 0; j < layout.size(); ++j) kept[j] += s.bits[j];
  }
  const auto& seg = layout.segments[target];
  double worst = 0.0;
  bool others_exact = true;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    if (j >= seg.begin && j < seg.end) {
      const double expect = 1.0 - 0.5 * (1.0 - layout.importance[j]);
      worst = std::max(worst, std::abs(kept[j] / double(draws) - expect));
    } else {
      others_exact = others_exact && kept[j] == draws;
    }
  }

  // forced bits after smart init: the first prunable layer excluded, the last below the sparsity
  // threshold, the rest pruned well above it
  BitMask shape(layout.size(), true);
  Rng cut = make_rng(33);
  for (std::size_t k = 0; k < layout.segments.size(); ++k) {
    const double drop = k == 2 ? 0.1 : 0.4;
    const auto& sg = layout.segments[k];
    for (std::size_t j = sg.begin; j < sg.end; ++j) shape.set(j, uniform01(cut) >= drop);
  }
  phase2::Corridor c;
  c.heavy = nn::apply_mask(t.net, shape);
  c.heavy_nonzeros = nn::nonzero_count(c.heavy);
  c.light_nonzeros = c.heavy_nonzeros / 2;
  c.bins = 5;
  c.per_bin = 10;
  phase2::ImportanceInitConfig cfg;
  cfg.seed = 34;
  const auto excluded = cfg.resolved_excluded(c.heavy);
  const auto heavy_layout = phase2::build_layout(c.heavy);
  std::vector<bool> expect_forced;
  for (const auto& sg : heavy_layout.segments) {
    const bool f = excluded.count(sg.layer) > 0 || sg.sparsity < cfg.sparsity_threshold;
    expect_forced.push_back(f);
    if (f != phase2::layer_forced(c.heavy.layers[sg.layer_index], cfg, excluded)) others_exact = false;
  }
  const auto init = phase2::smart_init(c, cfg);
  std::size_t forced_violations = 0, free_pruned = 0;
  for (const auto& m : init.masks) {
    for (std::size_t k = 0; k < heavy_layout.segments.size(); ++k) {
      const auto& sg = heavy_layout.segments[k];
      for (std::size_t j = sg.begin; j < sg.end; ++j) {
        if (expect_forced[k]) forced_violations += !m[j];
        else free_pruned += !m[j];
      }
    }
  }
  const bool shape_ok = expect_forced.size() == 3 && expect_forced[0] && !expect_forced[1] && expect_forced[2];
  return {worst <= kRetentionTolerance && others_exact && forced_violations == 0 && free_pruned > 0 && shape_ok,
          fmt("max retention error %.4f, forced bits pruned %zu, free bits pruned %zu", worst, forced_violations,
              free_pruned)};
}

double scaled_hv(const moea::ParetoFront& f) {
  std::vector<ObjectiveVector> pts;
  for (const auto& p : f.objectives()) pts.push_back({p.f1 / 4.0, p.f2 / 4.0});
  return metrics::hypervolume2(pts, NormalizationSpec{1});
}

Outcome a4_schaffer() {
  const auto t0 = Clock::now();
  const moea::FunctionProblem p({{-4.0, 4.0}}, [](const std::vector<double>& x) {
    return ObjectiveVector{x[0] * x[0], (x[0] - 2) * (x[0] - 2)};
  });
  moea::EAConfig cfg;
  cfg.seed = 41;
  const auto ns = moea::nsga2_run(p, cfg);
  const auto mo = moea::moead_run(p, cfg);
  double lo = 1e9, hi = -1e9;
  for (const auto* f : {&ns, &mo}) {
    for (const auto& m : f->members) {
      const double x = std::get<moea::Continuous>(m.genome).values[0];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double gap = std::abs(scaled_hv(ns) - scaled_hv(mo));
  const double s = seconds_since(t0);
  const bool ok = lo >= -kSchafferSlack && hi <= 2.0 + kSchafferSlack && gap < kSchafferHvGap && s < kSchafferSeconds;
  return {ok, fmt("x in [%.4f, %.4f], HV gap %.4f, %.2fs", lo, hi, gap, s)};
}

Outcome a9_operators() {
  using namespace moea;
  const int trials = 10000;
  Rng rng = make_rng(91);
  auto bounds = std::make_shared<const BoundsList>(BoundsList{{-1.0, 1.0}, {0.0, 5.0}, {-3.0, -2.0}});
  std::size_t out_of_bounds = 0;
  for (int t = 0; t < trials; ++t) {
    Continuous a{{}, bounds}, b{{}, bounds};
    for (std::size_t i = 0; i < bounds->size(); ++i) {
      const auto& bd = (*bounds)[i];
      a.values.push_back(bd.lo + uniform01(rng) * (bd.hi - bd.lo));
      b.values.push_back(bd.lo + uniform01(rng) * (bd.hi - bd.lo));
    }
    const auto [c1, c2] = sbx_crossover(a, b, 15.0, 1.0, rng);
    const auto m = polynomial_mutation(a, 20.0, 1.0, rng);
    out_of_bounds += !c1.within_bounds() + !c2.within_bounds() + !m.within_bounds();
  }

  std::size_t multiset_violations = 0;
  const std::size_t n = 64;
  for (int t = 0; t < trials; ++t) {
    BitMask x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x.set(i, uniform01(rng) < 0.5);
      y.set(i, uniform01(rng) < 0.5);
    }
    const auto [u, v] = uniform_crossover(x, y, 1.0, rng);
    for (std::size_t i = 0; i < n; ++i) multiset_violations += (x[i] + y[i]) != (u[i] + v[i]);
  }

  const std::size_t bits = 1000;
  const double p = 0.05, mean = bits * p, sigma = std::sqrt(bits * p * (1 - p));
  int outside = 0;
  double total = 0.0;
  const BitMask ones(bits, true);
  for (int t = 0; t < trials; ++t) {
    const double flipped = static_cast<double>(bits - bitflip_mutation(ones, p, rng).popcount());
    total += flipped;
    outside += std::abs(flipped - mean) > 3 * sigma;
  }
  // P(|Z| > 3) is about 0.3%; the mean is held to its own 3-sigma band.
  const bool flips_ok = outside < trials / 100 && std::abs(total / trials - mean) < 3 * sigma / std::sqrt(trials);

  const moea::FunctionProblem sch({{-4.0, 4.0}}, [](const std::vector<double>& x) {
    return ObjectiveVector{x[0] * x[0], (x[0] - 2) * (x[0] - 2)};
  });
  EAConfig cfg;
  cfg.seed = 92;
  RunOptions opts;
  opts.trace_normalization = NormalizationSpec{1};
  const auto front = moead_run(sch, cfg, opts);
  int ideal_increases = 0;
  for (std::size_t g = 1; g < front.trace.size(); ++g) {
    ideal_increases += front.trace[g].best_f1 > front.trace[g - 1].best_f1;
    ideal_increases += front.trace[g].best_f2 > front.trace[g - 1].best_f2;
  }
  const bool ok = out_of_bounds == 0 && multiset_violations == 0 && flips_ok && ideal_increases == 0;
  return {ok, fmt("out of bounds %zu, multiset violations %zu, flips outside 3 sigma %d, ideal increases %d",
                  out_of_bounds, multiset_violations, outside, ideal_increases)};
}

pipeline::RunConfig desk_config(std::uint64_t seed, const fs::path& out, std::size_t jobs) {
  pipeline::RunConfig cfg;
  cfg.seed = seed;
  cfg.output_dir = out;
  cfg.jobs = jobs;
  cfg.phase1.population = 50;
  cfg.phase1.generations = 20;
  cfg.validate();
  return cfg;
}

struct SeedRun {
  bool a5 = false;
  bool a6_nsga2 = false;
  bool a6_moead = false;
  bool a7 = false;
  bool a7_moead = false;
  std::string line;
};

bool any_dominates_light(const fs::path& p2_path) {
  const auto p2 = pipeline::read_p2(p2_path);
  const ObjectiveVector light{static_cast<double>(p2.header.light_f1), p2.header.light_f2_val};
  for (const auto& s : p2.solutions) {
    if (dominates(ObjectiveVector{static_cast<double>(s.f1), s.f2_val}, light)) return true;
  }
  return false;
}

SeedRun desk_run(std::uint64_t seed, const fs::path& root, std::size_t jobs) {
  SeedRun r;
  const auto dir = root / ("seed-" + std::to_string(seed));
  fs::remove_all(dir);
  std::ostringstream log;
  const auto cfg = desk_config(seed, dir, jobs);
  const auto t0 = Clock::now();
  const auto trained = pipeline::cmd_train(cfg, log);
  const auto p1_path = pipeline::cmd_phase1(cfg, trained.checkpoint, log);
  const auto p2_path = pipeline::cmd_phase2(cfg, trained.checkpoint, p1_path, log);
  const auto rep = pipeline::cmd_report(cfg, p1_path, p2_path, log);
  const double s = seconds_since(t0);

  const auto p1 = pipeline::read_p1(p1_path);
  double best_reduction = 0.0;
  for (const auto& sol : p1.solutions) {
    const double drop = trained.val_accuracy - (1.0 - sol.f2_val);
    const double reduction = 1.0 - static_cast<double>(sol.f1) / static_cast<double>(trained.nonzeros);
    if (drop <= kMaxAccuracyDrop + 1e-12) best_reduction = std::max(best_reduction, reduction);
  }
  r.a5 = trained.val_accuracy >= kMinBaselineAccuracy && best_reduction >= kMinReduction && s <= kPipelineSeconds;
  r.a6_nsga2 = rep.values.final_hv > rep.values.phase1_hv;
  r.a7 = any_dominates_light(p2_path);

  auto mcfg = cfg;
  mcfg.output_dir = dir / "moead";
  mcfg.engine = phase2::Engine::Moead;
  const auto p2m = pipeline::cmd_phase2(mcfg, trained.checkpoint, p1_path, log);
  const auto repm = pipeline::cmd_report(mcfg, p1_path, p2m, log);
  r.a6_moead = repm.values.final_hv > repm.values.phase1_hv;
  r.a7_moead = any_dominates_light(p2m);

  r.line = fmt("  seed %2llu: val acc %.4f, best reduction %.3f, %.1fs, HV %.4f -> %.4f (nsga2) %.4f (moead), "
               "light dominated: nsga2 %s moead %s",
               static_cast<unsigned long long>(seed), trained.val_accuracy, best_reduction, s,
               rep.values.phase1_hv, rep.values.final_hv, repm.values.final_hv, r.a7 ? "yes" : "no",
               r.a7_moead ? "yes" : "no");
  return r;
}

Outcome a8_reproducible(const fs::path& root, std::size_t jobs, fs::path& kept_run) {
  std::vector<fs::path> dirs;
  for (std::size_t j : {std::size_t{1}, jobs}) {
    const auto dir = root / ("repro-jobs-" + std::to_string(j) + "-" + std::to_string(dirs.size()));
    fs::remove_all(dir);
    std::ostringstream log;
    pipeline::cmd_pipeline(desk_config(3, dir, j), log);
    dirs.push_back(dir);
  }
  kept_run = dirs.back();
  int differing = 0;
  std::string which;
  for (const char* f : {"p1.csv", "p2.csv", "p2_masks.rle", "summary.json", "p1_trace.csv", "p2_trace.csv"}) {
    if (slurp(dirs[0] / f) != slurp(dirs[1] / f) || slurp(dirs[0] / f).empty()) {
      ++differing;
      which += std::string(" ") + f;
    }
  }
  return {differing == 0, fmt("jobs 1 vs %zu: %d differing artifact(s)%s", jobs, differing, which.c_str())};
}

Outcome a10_recompute(const fs::path& run) {
  const auto base = nn::load_checkpoint(run / "baseline.json").network;
  const auto val = data::read_csv(run / "data_val.csv");
  const auto opt = data::read_csv(run / "data_opt.csv");
  const auto p1 = pipeline::read_p1(run / "p1.csv");
  const auto p2 = pipeline::read_p2(run / "p2.csv");
  std::size_t bad = 0, checked = 0;
  for (const auto& s : p1.solutions) {
    const auto net = nn::apply_threshold(base, s.th1, s.th2);
    bad += s.f1 != nn::nonzero_count(net) || s.f2_opt != 1.0 - nn::accuracy(net, opt) ||
           s.f2_val != 1.0 - nn::accuracy(net, val);
    ++checked;
  }
  const auto heavy = nn::apply_threshold(base, p2.header.heavy_th1, p2.header.heavy_th2);
  bad += nn::nonzero_count(heavy) != p2.header.heavy_f1;
  for (const auto& s : p2.solutions) {
    const auto net = nn::apply_mask(heavy, s.mask);
    bad += s.f1 != nn::nonzero_count(net) || s.f2_opt != 1.0 - nn::accuracy(net, opt) ||
           s.f2_val != 1.0 - nn::accuracy(net, val) || s.popcount != static_cast<std::int64_t>(s.mask.popcount());
    ++checked;
  }
  return {bad == 0 && checked > 2, fmt("%zu solution(s) re-applied, %zu mismatch(es)", checked, bad)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evoprune acceptance suite"};
  std::size_t jobs = 4;
  int seeds = 10;
  std::string work = (fs::temp_directory_path() / "evoprune-acceptance").string();
  std::string only;
  app.add_option("--jobs", jobs, "Worker threads for the desk-scale runs")->check(CLI::PositiveNumber);
  app.add_option("--seeds", seeds, "Seeded desk-scale runs for A5-A7")->check(CLI::PositiveNumber);
  app.add_option("--workdir", work, "Scratch directory for run artifacts");
  app.add_option("--only", only, "Comma-separated criteria to run, e.g. A1,A4");
  CLI11_PARSE(app, argc, argv);

  std::set<std::string> selected;
  for (std::stringstream ss(only); ss.good();) {
    std::string tok;
    std::getline(ss, tok, ',');
    if (!tok.empty()) selected.insert(tok);
  }
  const auto wanted = [&](const std::string& id) { return selected.empty() || selected.count(id) > 0; };
  const fs::path root = work;
  fs::create_directories(root);

  int failures = 0;
  const auto report = [&](const std::string& id, const std::function<Outcome()>& fn) {
    if (!wanted(id)) return;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << id << (o.pass ? " PASS " : " FAIL ") << o.detail << std::endl;
  };

  report("A1", a1_sorting);
  report("A2", a2_hypervolume);
  report("A3", a3_importance);
  report("A4", a4_schaffer);

  if (wanted("A5") || wanted("A6") || wanted("A7")) {
    int n5 = 0, n6n = 0, n6m = 0, n7 = 0, n7m = 0;
    std::vector<std::string> lines;
    std::string error;
    try {
      for (int s = 1; s <= seeds; ++s) {
        const auto r = desk_run(static_cast<std::uint64_t>(s), root, jobs);
        n5 += r.a5;
        n6n += r.a6_nsga2;
        n6m += r.a6_moead;
        n7 += r.a7;
        n7m += r.a7_moead;
        std::cout << r.line << std::endl;
      }
    } catch (const std::exception& e) {
      error = std::string("threw: ") + e.what();
    }
    const auto scale = [&](int need) { return (need * seeds + 9) / 10; };
    report("A5", [&] {
      return Outcome{error.empty() && n5 >= scale(kA5Required),
                     error.empty() ? fmt("%d/%d seeds", n5, seeds) : error};
    });
    report("A6", [&] {
      return Outcome{error.empty() && n6n >= scale(kA6Required) && n6m >= scale(kA6Required),
                     error.empty() ? fmt("nsga2 %d/%d, moead %d/%d seeds", n6n, seeds, n6m, seeds) : error};
    });
    report("A7", [&] {
      return Outcome{error.empty() && n7 >= scale(kA7Required),
                     error.empty() ? fmt("nsga2 %d/%d seeds (moead %d/%d)", n7, seeds, n7m, seeds) : error};
    });
  }

  fs::path repro_run;
  report("A8", [&] { return a8_reproducible(root, jobs, repro_run); });
  report("A9", a9_operators);
  report("A10", [&] {
    if (repro_run.empty()) {
      repro_run = root / "recompute";
      fs::remove_all(repro_run);
      std::ostringstream log;
      pipeline::cmd_pipeline(desk_config(3, repro_run, jobs), log);
    }
    return a10_recompute(repro_run);
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
