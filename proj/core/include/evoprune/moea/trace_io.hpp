#pragma once

#include <filesystem>
#include <vector>

#include "evoprune/moea/front.hpp"

namespace evoprune::moea {

/// CSV "generation,best_f1,best_f2,hypervolume", 17 significant digits.
void write_trace(const std::vector<GenerationRecord>& trace, const std::filesystem::path& path);
std::vector<GenerationRecord> read_trace(const std::filesystem::path& path);

}  // namespace evoprune::moea
