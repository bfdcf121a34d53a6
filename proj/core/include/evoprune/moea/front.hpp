#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evoprune/moea/genome.hpp"
#include "evoprune/objectives.hpp"

namespace evoprune::moea {

/// Search-time individual. Objectives are empty until evaluated.
struct Individual {
  Genome genome;
  std::optional<ObjectiveVector> objectives;
  int rank = -1;
  double crowding = 0.0;
  int generation = 0;
};

struct FrontMember {
  Genome genome;
  ObjectiveVector objectives;
  int generation = 0;   // generation in which the genome was created
  std::string origin;   // phase tag, kept through merges
};

struct GenerationRecord {
  int generation = 0;
  double best_f1 = 0.0;
  double best_f2 = 0.0;
  double hypervolume = 0.0;
};

/// Non-dominated result set of one run, with provenance.
struct ParetoFront {
  std::string phase;
  std::uint64_t seed = 0;
  std::string created_at;  // ISO-8601 UTC
  std::optional<NormalizationSpec> normalization;
  std::vector<FrontMember> members;
  std::vector<GenerationRecord> trace;

  std::vector<ObjectiveVector> objectives() const;
  std::size_t size() const noexcept { return members.size(); }
};

std::string utc_timestamp();

}  // namespace evoprune::moea
