#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evoprune/moea/front.hpp"
#include "evoprune/phase1.hpp"
#include "evoprune/phase2.hpp"

namespace evoprune::pipeline {

inline constexpr int kFrontFormatVersion = 1;

struct P1File {
  std::int64_t f1_ref = 1;
  std::uint64_t seed = 0;
  std::vector<phase1::ThresholdSolution> solutions;
};

struct P2Header {
  std::int64_t f1_ref = 0;  // 0 only for an empty, headerless file
  std::uint64_t seed = 0;
  std::string engine;
  std::size_t heavy_index = 0;
  std::size_t light_index = 0;
  double heavy_th1 = 0.0;
  double heavy_th2 = 0.0;
  std::int64_t heavy_f1 = 0;
  std::int64_t light_f1 = 0;
  double light_f2_val = 0.0;
  std::string masks = "p2_masks.rle";  // sidecar, relative to the P2 file
};

struct P2File {
  P2Header header;
  std::vector<phase2::MaskSolution> solutions;
};

void write_p1(const std::filesystem::path& path, const P1File& file);
P1File read_p1(const std::filesystem::path& path);

/// Writes the CSV and the mask sidecar next to it.
void write_p2(const std::filesystem::path& path, const P2File& file);
/// A zero-byte file reads as an empty result with a default header.
P2File read_p2(const std::filesystem::path& path);

/// Fronts in report space (f1, validation error), normalized by f1_ref.
moea::ParetoFront report_front(const P1File& file);
moea::ParetoFront report_front(const P2File& file);

}  // namespace evoprune::pipeline
