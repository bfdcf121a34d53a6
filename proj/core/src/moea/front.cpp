#include "evoprune/moea/front.hpp"

#include <chrono>
#include <ctime>

#include "evoprune/error.hpp"
#include "evoprune/moea/config.hpp"

namespace evoprune::moea {

std::vector<ObjectiveVector> ParetoFront::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.objectives);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void EAConfig::validate() const {
  if (population < 4 || population % 2 != 0) throw InvalidSpecError("population must be even and >= 4");
  if (generations < 0) throw InvalidSpecError("generations must be >= 0");
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidSpecError(std::string(name) + " must lie in [0, 1]");
  };
  prob(crossover_prob, "crossover_prob");
  prob(mutation_prob, "mutation_prob");
  prob(moead_mating_prob, "moead_mating_prob");
  if (!(sbx_eta >= 0.0) || !(poly_eta >= 0.0)) throw InvalidSpecError("distribution indices must be >= 0");
  if (moead_neighbors < 2) throw InvalidSpecError("moead_neighbors must be >= 2");
}

EAConfig EAConfig::binary_defaults() {
  EAConfig cfg;
  cfg.crossover_prob = 0.9;
  cfg.mutation_prob = 0.05;
  return cfg;
}

}  // namespace evoprune::moea
