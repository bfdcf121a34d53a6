#pragma once

#include <cstddef>
#include <functional>

namespace evoprune::moea {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are
/// rethrown on the caller (lowest failing index wins).
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace evoprune::moea
