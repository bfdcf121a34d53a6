#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace evoprune {

/// Bi-objective value, both minimized: f1 = retained nonzero weights,
/// f2 = classification error.
struct ObjectiveVector {
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// Pareto dominance: a is no worse in both objectives and strictly better in one.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

/// Maps raw objectives into the unit square for hypervolume: f1 / f1_ref,
/// f2 as-is. The reference point is (1, 1) in normalized space.
struct NormalizationSpec {
  std::int64_t f1_ref = 1;

  ObjectiveVector normalize(const ObjectiveVector& v) const noexcept {
    return {v.f1 / static_cast<double>(f1_ref), v.f2};
  }

  friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;
};

/// Throws NormalizationMismatch unless every present spec equals `shared`.
void require_shared(const NormalizationSpec& shared, const std::optional<NormalizationSpec>& a,
                    const std::optional<NormalizationSpec>& b);

std::string to_string(const ObjectiveVector& v);

}  // namespace evoprune
