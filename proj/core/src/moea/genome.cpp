#include "evoprune/moea/genome.hpp"

namespace evoprune::moea {

bool Continuous::within_bounds() const {
  if (!bounds || bounds->size() != values.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= (*bounds)[i].lo && values[i] <= (*bounds)[i].hi)) return false;
  }
  return true;
}

GenomeKind kind_of(const Genome& g) noexcept {
  return std::holds_alternative<Continuous>(g) ? GenomeKind::Continuous : GenomeKind::Binary;
}

std::size_t length_of(const Genome& g) noexcept {
  return std::visit(
      [](const auto& x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Continuous>) {
          return x.values.size();
        } else {
          return x.size();
        }
      },
      g);
}

}  // namespace evoprune::moea
