#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evoprune/error.hpp"
#include "evoprune/phase2.hpp"
#include "evoprune/pipeline/config.hpp"
#include "evoprune/pipeline/stages.hpp"

namespace fs = std::filesystem;
using namespace evoprune;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> engine;
  std::vector<std::size_t> anchors;
  std::optional<std::size_t> jobs;
  std::optional<std::string> checkpoint, p1, p2;
};

pipeline::RunConfig resolve(const Flags& f) {
  auto cfg = f.config.empty() ? pipeline::RunConfig{} : pipeline::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.output_dir = *f.out;
  if (f.engine) cfg.engine = phase2::parse_engine(*f.engine);
  if (!f.anchors.empty()) cfg.anchors.override_indices = std::make_pair(f.anchors[0], f.anchors[1]);
  if (f.jobs) cfg.jobs = *f.jobs;
  cfg.validate();
  return cfg;
}

fs::path or_default(const std::optional<std::string>& v, const fs::path& dflt) { return v ? fs::path(*v) : dflt; }

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--jobs", f.jobs, "worker threads for evaluation")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase evolutionary pruning of small feedforward networks"};
  app.require_subcommand(1);
  Flags f;

  auto* train = app.add_subcommand("train", "generate data and train the baseline network");
  auto* p1 = app.add_subcommand("phase1", "threshold search on the baseline");
  auto* p2 = app.add_subcommand("phase2", "mask search between the anchor models");
  auto* report = app.add_subcommand("report", "summary and front plot from P1/P2 files");
  auto* pipe = app.add_subcommand("pipeline", "run every stage in order");
  for (auto* sub : {train, p1, p2, report, pipe}) add_common(sub, f);
  for (auto* sub : {p1, p2}) sub->add_option("--checkpoint", f.checkpoint, "baseline checkpoint manifest");
  for (auto* sub : {p2, report}) sub->add_option("--p1", f.p1, "Phase-1 export");
  report->add_option("--p2", f.p2, "Phase-2 export");
  for (auto* sub : {p2, pipe}) {
    sub->add_option("--engine", f.engine, "nsga2 or moead");
    sub->add_option("--anchors", f.anchors, "heavy and light Phase-1 indices")->expected(2);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::Config);
  }

  try {
    const auto cfg = resolve(f);
    const fs::path ckpt = or_default(f.checkpoint, cfg.output_dir / "baseline.json");
    const fs::path p1_path = or_default(f.p1, cfg.output_dir / "p1.csv");
    const fs::path p2_path = or_default(f.p2, cfg.output_dir / "p2.csv");

    if (train->parsed()) {
      std::cout << pipeline::cmd_train(cfg, std::cout).checkpoint.string() << "\n";
    } else if (p1->parsed()) {
      std::cout << pipeline::cmd_phase1(cfg, ckpt, std::cout).string() << "\n";
    } else if (p2->parsed()) {
      std::cout << pipeline::cmd_phase2(cfg, ckpt, p1_path, std::cout).string() << "\n";
    } else if (report->parsed()) {
      const auto r = pipeline::cmd_report(cfg, p1_path, p2_path, std::cout);
      std::cout << r.summary.string() << "\n" << r.plot.string() << "\n";
    } else {
      std::cout << pipeline::cmd_pipeline(cfg, std::cout).string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::Data);
  }
  return 0;
}
