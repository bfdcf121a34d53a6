#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "evoprune/bitmask.hpp"

namespace evoprune::moea {

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

using BoundsList = std::vector<Bounds>;

/// Real-coded genome; bounds are shared between individuals of one problem.
struct Continuous {
  std::vector<double> values;
  std::shared_ptr<const BoundsList> bounds;

  const Bounds& bound(std::size_t i) const { return (*bounds)[i]; }
  bool within_bounds() const;
};

using Binary = BitMask;

using Genome = std::variant<Continuous, Binary>;

enum class GenomeKind { Continuous, Binary };

GenomeKind kind_of(const Genome& g) noexcept;
std::size_t length_of(const Genome& g) noexcept;

}  // namespace evoprune::moea
