#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evoprune/error.hpp"

namespace evoprune::nn {

/// Dense row-major matrix of doubles.
struct Tensor2 {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Tensor2() = default;
  Tensor2(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  Tensor2(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != rows * cols) throw ShapeError("tensor values do not match rows*cols");
  }

  double& operator()(std::size_t r, std::size_t c) noexcept { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const noexcept { return {values.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) noexcept { return {values.data() + r * cols, cols}; }

  std::size_t size() const noexcept { return values.size(); }

  friend bool operator==(const Tensor2&, const Tensor2&) = default;
};

}  // namespace evoprune::nn
