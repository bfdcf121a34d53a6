#include "evoprune/pipeline/stages.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "evoprune/data/dataset.hpp"
#include "evoprune/error.hpp"
#include "evoprune/moea/trace_io.hpp"
#include "evoprune/nn/checkpoint.hpp"
#include "evoprune/phase1.hpp"
#include "evoprune/phase2.hpp"
#include "evoprune/pipeline/front_io.hpp"
#include "evoprune/pipeline/svg_plot.hpp"
#include "json.hpp"

namespace evoprune::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

fs::path manifest_path(const RunConfig& cfg) { return cfg.output_dir / "manifest.json"; }

void record(const RunConfig& cfg, const std::string& stage, double secs,
            const std::map<std::string, fs::path>& artifacts) {
  auto m = RunManifest::load(manifest_path(cfg));
  m.config = config_json(cfg);
  m.stage_seconds[stage] = secs;
  for (const auto& [k, v] : artifacts) m.artifacts[k] = v;
  m.write(manifest_path(cfg));
}

data::LabeledSet load_set(const fs::path& checkpoint, const std::string& name) {
  return data::read_csv(checkpoint.parent_path() / ("data_" + name + ".csv"));
}

std::string pct(double v) {
  std::ostringstream o;
  o.precision(2);
  o << std::fixed << 100.0 * v << "%";
  return o.str();
}

}  // namespace

void RunManifest::write(const fs::path& path) const {
  json j;
  j["format"] = "evoprune-manifest";
  j["version"] = kManifestVersion;
  j["config"] = config.empty() ? json(nullptr) : json::parse(config);
  json arts = json::object();
  for (const auto& [k, v] : artifacts) {
    if (!fs::exists(v)) throw IoError("manifest artifact '" + k + "' does not exist: " + v.string());
    arts[k] = v.string();
  }
  j["artifacts"] = arts;
  json times = json::object();
  for (const auto& [k, v] : stage_seconds) times[k] = v;
  j["stage_seconds"] = times;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

RunManifest RunManifest::load(const fs::path& path) {
  RunManifest m;
  if (!fs::exists(path)) return m;
  std::ifstream in(path);
  json j;
  try {
    j = json::parse(in);
    if (j.at("format") != "evoprune-manifest" || j.at("version") != kManifestVersion) {
      throw FormatError(path.string() + ": not a version " + std::to_string(kManifestVersion) + " manifest");
    }
    if (!j.at("config").is_null()) m.config = j.at("config").dump(2);
    for (const auto& [k, v] : j.at("artifacts").items()) m.artifacts[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("stage_seconds").items()) m.stage_seconds[k] = v.get<double>();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return m;
}

TrainResult cmd_train(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const auto& d = cfg.dataset;

  const auto all = data::generate_blobs(d.classes, d.dim, d.per_class, d.spread, cfg.data_seed());
  const auto split =
      data::stratified_split(all, {d.train_fraction, d.val_fraction, d.opt_per_class, cfg.split_seed()});
  std::map<std::string, fs::path> arts;
  for (const auto& [name, set] : {std::pair{"train", &split.train},
                                  std::pair{"val", &split.val},
                                  std::pair{"opt", &split.opt},
                                  std::pair{"test", &split.test}}) {
    const fs::path p = cfg.output_dir / ("data_" + std::string(name) + ".csv");
    data::write_csv(*set, p);
    arts[std::string("data_") + name] = p;
  }

  auto net = nn::init_network(cfg.network.widths, cfg.init_seed());
  for (auto& layer : net.layers) {
    layer.prunable = std::find(cfg.network.non_prunable.begin(), cfg.network.non_prunable.end(), layer.name) ==
                     cfg.network.non_prunable.end();
  }
  auto tcfg = cfg.train;
  tcfg.seed = cfg.train_seed();
  net = nn::train(net, split.train, tcfg);

  TrainResult r;
  r.checkpoint = cfg.output_dir / "baseline.json";
  nn::save_checkpoint({net, cfg.seed}, r.checkpoint);
  r.val_accuracy = nn::accuracy(net, split.val);
  r.nonzeros = nn::nonzero_count(net);
  arts["checkpoint"] = r.checkpoint;

  log << "baseline: val accuracy " << pct(r.val_accuracy) << ", test accuracy " << pct(nn::accuracy(net, split.test))
      << ", " << r.nonzeros << " nonzero prunable weights\n";
  record(cfg, "train", seconds_since(t0), arts);
  return r;
}

fs::path cmd_phase1(const RunConfig& cfg, const fs::path& checkpoint, std::ostream& log) {
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const auto base = nn::load_checkpoint(checkpoint).network;
  const auto val = load_set(checkpoint, "val");
  const auto eval = cfg.phase1_eval == EvalSubset::Opt ? load_set(checkpoint, "opt") : val;

  auto ea = cfg.phase1;
  ea.seed = cfg.phase1_seed();
  moea::RunOptions opts;
  opts.jobs = cfg.jobs;
  opts.trace_normalization = NormalizationSpec{nn::nonzero_count(base)};
  const auto front = phase1::run_phase1(base, eval, ea, opts);

  P1File file;
  file.f1_ref = nn::nonzero_count(base);
  file.seed = ea.seed;
  file.solutions = phase1::rescore(front, base, val);

  const fs::path p1 = cfg.output_dir / "p1.csv";
  const fs::path trace = cfg.output_dir / "p1_trace.csv";
  write_p1(p1, file);
  moea::write_trace(front.trace, trace);

  log << "phase1: " << file.solutions.size() << " solutions\n";
  for (std::size_t i = 0; i < file.solutions.size(); ++i) {
    const auto& s = file.solutions[i];
    log << "  [" << i << "] nonzeros " << s.f1 << "  val error " << s.f2_val << "\n";
  }
  record(cfg, "phase1", seconds_since(t0), {{"p1", p1}, {"p1_trace", trace}});
  return p1;
}

fs::path cmd_phase2(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& p1_path, std::ostream& log) {
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const auto base = nn::load_checkpoint(checkpoint).network;
  const auto p1 = read_p1(p1_path);
  if (p1.f1_ref != nn::nonzero_count(base)) {
    throw NormalizationMismatch(p1_path.string() + " has f1_ref=" + std::to_string(p1.f1_ref) +
                                " but the checkpoint has " + std::to_string(nn::nonzero_count(base)) + " nonzeros");
  }
  const auto val = load_set(checkpoint, "val");
  const auto eval = cfg.phase2_eval == EvalSubset::Opt ? load_set(checkpoint, "opt") : val;

  const auto anchors = phase2::select_anchors(p1.solutions, cfg.anchors);
  const auto& heavy = p1.solutions[anchors.heavy];
  const auto& light = p1.solutions[anchors.light];
  const auto corridor = phase2::make_corridor(base, heavy, light, cfg.bins, cfg.phase2.population);
  log << "phase2: anchors heavy [" << anchors.heavy << "] " << heavy.f1 << " nonzeros, light [" << anchors.light
      << "] " << light.f1 << " nonzeros\n";

  auto ea = cfg.phase2;
  ea.seed = cfg.phase2_seed();
  auto icfg = cfg.importance;
  icfg.seed = cfg.importance_seed();
  moea::RunOptions opts;
  opts.jobs = cfg.jobs;
  opts.trace_normalization = NormalizationSpec{p1.f1_ref};
  std::vector<std::string> warnings;
  const auto front = phase2::run_phase2(corridor, eval, ea, icfg, cfg.engine, opts, &warnings);
  for (const auto& w : warnings) log << "warning: " << w << "\n";

  P2File file;
  auto& h = file.header;
  h.f1_ref = p1.f1_ref;
  h.seed = ea.seed;
  h.engine = phase2::to_string(cfg.engine);
  h.heavy_index = anchors.heavy;
  h.light_index = anchors.light;
  h.heavy_th1 = heavy.th1;
  h.heavy_th2 = heavy.th2;
  h.heavy_f1 = heavy.f1;
  h.light_f1 = light.f1;
  h.light_f2_val = light.f2_val;
  file.solutions = phase2::rescore(front, corridor.heavy, val, cfg.engine);

  const fs::path p2 = cfg.output_dir / "p2.csv";
  const fs::path trace = cfg.output_dir / "p2_trace.csv";
  write_p2(p2, file);
  moea::write_trace(front.trace, trace);

  log << "phase2 (" << h.engine << "): " << file.solutions.size() << " solutions\n";
  record(cfg, "phase2", seconds_since(t0),
         {{"p2", p2}, {"p2_masks", cfg.output_dir / h.masks}, {"p2_trace", trace}});
  return p2;
}

ReportResult cmd_report(const RunConfig& cfg, const fs::path& p1_path, const fs::path& p2_path, std::ostream& log) {
  const auto t0 = Clock::now();
  ensure_dir(cfg.output_dir);
  const auto p1 = read_p1(p1_path);
  const auto p2 = read_p2(p2_path);
  const NormalizationSpec norm{p1.f1_ref};
  const auto f1 = report_front(p1);
  const auto f2 = report_front(p2);
  require_shared(norm, f1.normalization, f2.normalization);

  const ObjectiveVector light{static_cast<double>(p2.header.light_f1), p2.header.light_f2_val};
  ReportResult r;
  r.values = metrics::dominance_report(f1, f2, light, norm);
  for (const auto& w : r.values.warnings) log << "warning: " << w << "\n";

  r.summary = cfg.output_dir / "summary.json";
  {
    std::ofstream out(r.summary);
    if (!out) throw IoError("cannot write " + r.summary.string());
    out << metrics::summary_json(r.values, norm);
    if (!out) throw IoError("write failed for " + r.summary.string());
  }

  std::vector<PlotSeries> series;
  series.push_back({"Phase 1", "#1f77b4", f1.objectives(), false, 3.5});
  series.push_back({"Phase 2", "#ff7f0e", f2.objectives(), false, 3.0});
  series.push_back({"merged front", "#2ca02c", metrics::merge_fronts(f1, f2, norm).objectives(), true, 1.5});
  if (p2.header.f1_ref > 0) {
    std::vector<ObjectiveVector> anchors;
    if (p2.header.heavy_index < p1.solutions.size()) {
      const auto& h = p1.solutions[p2.header.heavy_index];
      anchors.push_back({static_cast<double>(h.f1), h.f2_val});
    }
    anchors.push_back(light);
    series.push_back({"anchors", "#d62728", anchors, false, 6.0});
  }
  r.plot = cfg.output_dir / "front.svg";
  write_svg(r.plot, series, "Pareto fronts");

  log << "report: Phase 1 HV " << r.values.phase1_hv << ", Final HV " << r.values.final_hv << ", HV delta "
      << r.values.hv_delta << ", " << r.values.dominating << " dominating solutions\n";
  record(cfg, "report", seconds_since(t0), {{"summary", r.summary}, {"plot", r.plot}});
  return r;
}

fs::path cmd_pipeline(const RunConfig& cfg, std::ostream& log) {
  std::string stage;
  try {
    stage = "train";
    const auto trained = cmd_train(cfg, log);
    stage = "phase1";
    const auto p1 = cmd_phase1(cfg, trained.checkpoint, log);
    stage = "phase2";
    const auto p2 = cmd_phase2(cfg, trained.checkpoint, p1, log);
    stage = "report";
    cmd_report(cfg, p1, p2, log);
  } catch (const Error& e) {
    throw Error(e.kind(), "stage " + stage + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Data, "stage " + stage + ": " + e.what());
  }
  return manifest_path(cfg);
}

}  // namespace evoprune::pipeline
