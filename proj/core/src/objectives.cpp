#include "evoprune/objectives.hpp"

#include <cstdio>

#include "evoprune/error.hpp"

namespace evoprune {

void require_shared(const NormalizationSpec& shared, const std::optional<NormalizationSpec>& a,
                    const std::optional<NormalizationSpec>& b) {
  for (const auto* spec : {&a, &b}) {
    if (spec->has_value() && !(**spec == shared)) {
      throw NormalizationMismatch("front normalized with f1_ref=" + std::to_string((*spec)->f1_ref) +
                                  " but shared spec has f1_ref=" + std::to_string(shared.f1_ref));
    }
  }
}

std::string to_string(const ObjectiveVector& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", v.f1, v.f2);
  return buf;
}

}  // namespace evoprune
