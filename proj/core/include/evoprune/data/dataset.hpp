#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "evoprune/nn/tensor.hpp"

namespace evoprune::data {

struct LabeledSet {
  nn::Tensor2 features;
  std::vector<int> labels;
  int classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }

  /// Checks label count matches rows and every label is in [0, classes).
  void validate() const;

  /// Rows at `indices`, in that order.
  LabeledSet subset(const std::vector<std::size_t>& indices) const;

  std::vector<std::size_t> class_counts() const;

  friend bool operator==(const LabeledSet&, const LabeledSet&) = default;
};

struct SplitSpec {
  double train_fraction = 0.7;
  double val_fraction = 0.1;
  int opt_per_class = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Split {
  LabeledSet train;
  LabeledSet val;
  LabeledSet opt;
  LabeledSet test;
  // Source row indices of each subset, for partition checks.
  std::vector<std::size_t> train_rows, val_rows, opt_rows, test_rows;
};

/// Balanced Gaussian clusters. Class means sit on signed coordinate axes with
/// pairwise distance at least 4 * spread + 4, so classes <= 2 * dim. Features
/// are standardized per dimension afterwards.
LabeledSet generate_blobs(int classes, int dim, int per_class, double spread, std::uint64_t seed);

/// Centers each feature to zero mean and scales to unit variance. Constant
/// columns are only centered.
void standardize(LabeledSet& set);

/// Stratified four-way split. The optimization subset holds exactly
/// opt_per_class rows of every class; train and val sizes are
/// round(fraction * rows) allocated over classes by largest remainder; test
/// takes the rest.
Split stratified_split(const LabeledSet& data, const SplitSpec& spec);

/// Delimited text: header "x0,...,x{d-1},label" then one row per sample with
/// features printed to 17 significant digits. `classes` is written as a
/// leading "# classes=<n>" line.
void write_csv(const LabeledSet& set, const std::filesystem::path& path);
LabeledSet read_csv(const std::filesystem::path& path);

}  // namespace evoprune::data
