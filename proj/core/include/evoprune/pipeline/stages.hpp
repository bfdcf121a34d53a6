#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "evoprune/metrics.hpp"
#include "evoprune/pipeline/config.hpp"

namespace evoprune::pipeline {

inline constexpr int kManifestVersion = 1;

/// Index of a run directory. Stages merge their entries into manifest.json.
struct RunManifest {
  std::string config;                                  // JSON snapshot
  std::map<std::string, std::filesystem::path> artifacts;
  std::map<std::string, double> stage_seconds;

  /// Throws IoError if any artifact is missing.
  void write(const std::filesystem::path& path) const;
  /// Empty manifest if `path` does not exist.
  static RunManifest load(const std::filesystem::path& path);
};

struct TrainResult {
  std::filesystem::path checkpoint;
  double val_accuracy = 0.0;
  std::int64_t nonzeros = 0;
};

struct ReportResult {
  std::filesystem::path summary;
  std::filesystem::path plot;
  metrics::DominanceSummary values;
};

/// Generates and splits data (data_*.csv), trains the baseline, writes
/// baseline.json and its blobs into cfg.output_dir.
TrainResult cmd_train(const RunConfig& cfg, std::ostream& log);

/// Reads the checkpoint and the data files next to it; writes p1.csv and p1_trace.csv.
std::filesystem::path cmd_phase1(const RunConfig& cfg, const std::filesystem::path& checkpoint, std::ostream& log);

/// Writes p2.csv, p2_masks.rle and p2_trace.csv.
std::filesystem::path cmd_phase2(const RunConfig& cfg, const std::filesystem::path& checkpoint,
                                 const std::filesystem::path& p1, std::ostream& log);

/// Writes summary.json and front.svg. Throws NormalizationMismatch when the
/// two files disagree on f1_ref.
ReportResult cmd_report(const RunConfig& cfg, const std::filesystem::path& p1, const std::filesystem::path& p2,
                        std::ostream& log);

/// All stages in order; returns the manifest path. Failures are rethrown with
/// the stage name prepended, keeping their error kind.
std::filesystem::path cmd_pipeline(const RunConfig& cfg, std::ostream& log);

}  // namespace evoprune::pipeline
