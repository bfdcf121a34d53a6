#include <algorithm>
#include <fstream>
#include <set>

#include "doctest.h"
#include "evoprune/data/dataset.hpp"
#include "evoprune/error.hpp"
#include "fixtures.hpp"

using namespace evoprune;

namespace {

double nearest_centroid_accuracy(const data::LabeledSet& s) {
  const std::size_t d = s.features.cols, k = static_cast<std::size_t>(s.classes);
  std::vector<double> mean(k * d, 0.0);
  std::vector<std::size_t> n(k, 0);
  for (std::size_t r = 0; r < s.size(); ++r) {
    const auto c = static_cast<std::size_t>(s.labels[r]);
    ++n[c];
    for (std::size_t i = 0; i < d; ++i) mean[c * d + i] += s.features(r, i);
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < d; ++i) mean[c * d + i] /= static_cast<double>(n[c]);
  }
  std::size_t hits = 0;
  for (std::size_t r = 0; r < s.size(); ++r) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double dist = 0;
      for (std::size_t i = 0; i < d; ++i) dist += std::pow(s.features(r, i) - mean[c * d + i], 2);
      if (dist < best_d) best_d = dist, best = c;
    }
    hits += static_cast<int>(best) == s.labels[r];
  }
  return static_cast<double>(hits) / static_cast<double>(s.size());
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("blobs have the requested shape and balance") {
    const auto s = data::generate_blobs(4, 8, 250, 1.0, 42);
    CHECK(s.size() == 1000);
    CHECK(s.features.cols == 8);
    CHECK(s.classes == 4);
    CHECK(s.class_counts() == std::vector<std::size_t>{250, 250, 250, 250});
    CHECK(data::generate_blobs(4, 8, 250, 1.0, 42) == s);
    CHECK_FALSE(data::generate_blobs(4, 8, 250, 1.0, 43) == s);
  }

  TEST_CASE("blob features are standardized") {
    const auto s = data::generate_blobs(3, 4, 100, 1.0, 1);
    for (std::size_t c = 0; c < 4; ++c) {
      double m = 0, v = 0;
      for (std::size_t r = 0; r < s.size(); ++r) m += s.features(r, c);
      m /= static_cast<double>(s.size());
      for (std::size_t r = 0; r < s.size(); ++r) v += std::pow(s.features(r, c) - m, 2);
      v /= static_cast<double>(s.size());
      CHECK(m == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("nearest-centroid oracle separates tight blobs perfectly") {
    CHECK(nearest_centroid_accuracy(data::generate_blobs(4, 8, 100, 1e-3, 3)) == 1.0);
    CHECK(nearest_centroid_accuracy(data::generate_blobs(6, 3, 50, 1e-3, 3)) == 1.0);
    CHECK(nearest_centroid_accuracy(data::generate_blobs(4, 8, 250, 1.0, 42)) >= 0.99);
  }

  TEST_CASE("invalid blob specs") {
    CHECK_THROWS_AS(data::generate_blobs(1, 8, 10, 1.0, 0), InvalidSpecError);
    CHECK_THROWS_AS(data::generate_blobs(4, 1, 10, 1.0, 0), InvalidSpecError);
    CHECK_THROWS_AS(data::generate_blobs(4, 8, 1, 1.0, 0), InvalidSpecError);
    CHECK_THROWS_AS(data::generate_blobs(5, 2, 10, 1.0, 0), InvalidSpecError);
    CHECK_THROWS_AS(data::generate_blobs(2, 2, 10, -1.0, 0), InvalidSpecError);
  }

  TEST_CASE("standardize only centers constant columns") {
    data::LabeledSet s;
    s.classes = 2;
    s.features = nn::Tensor2(3, 2, {1, 5, 2, 5, 3, 5});
    s.labels = {0, 1, 0};
    data::standardize(s);
    CHECK(s.features(0, 1) == 0.0);
    CHECK(s.features(2, 1) == 0.0);
    CHECK(s.features(0, 0) == doctest::Approx(-std::sqrt(1.5)));
  }

  TEST_CASE("stratified split partitions the rows") {
    const auto all = data::generate_blobs(4, 8, 250, 1.0, 42);
    data::SplitSpec spec;
    spec.seed = 5;
    const auto sp = data::stratified_split(all, spec);
    CHECK(sp.opt.size() == 40);
    CHECK(sp.opt.class_counts() == std::vector<std::size_t>{10, 10, 10, 10});
    CHECK(sp.train.size() == 700);
    CHECK(sp.val.size() == 100);
    CHECK(sp.test.size() == 160);

    std::set<std::size_t> seen;
    for (const auto* rows : {&sp.train_rows, &sp.val_rows, &sp.opt_rows, &sp.test_rows}) {
      for (auto r : *rows) CHECK(seen.insert(r).second);
    }
    CHECK(seen.size() == all.size());
    CHECK(sp.val == all.subset(sp.val_rows));
    CHECK(sp.test == all.subset(sp.test_rows));

    const auto again = data::stratified_split(all, spec);
    CHECK(again.train_rows == sp.train_rows);
    CHECK(again.opt_rows == sp.opt_rows);
  }

  TEST_CASE("per-class subset sizes track the source proportions") {
    // Unbalanced source: expected per-class count is fraction * class size.
    data::LabeledSet s;
    s.classes = 3;
    const std::vector<std::size_t> sizes{300, 150, 60};
    std::size_t total = 0;
    for (auto n : sizes) total += n;
    s.features = nn::Tensor2(total, 2, 0.0);
    for (int c = 0; c < 3; ++c) s.labels.insert(s.labels.end(), sizes[c], c);
    data::SplitSpec spec{0.5, 0.2, 5, 1};
    const auto sp = data::stratified_split(s, spec);
    const auto val = sp.val.class_counts();
    const auto train = sp.train.class_counts();
    for (int c = 0; c < 3; ++c) {
      CHECK(std::abs(static_cast<double>(val[c]) - 0.2 * static_cast<double>(sizes[c])) <= 1.0);
      CHECK(std::abs(static_cast<double>(train[c]) - 0.5 * static_cast<double>(sizes[c])) <= 1.0);
      CHECK(sp.opt.class_counts()[c] == 5);
    }
  }

  TEST_CASE("split preconditions") {
    const auto all = data::generate_blobs(2, 2, 10, 1.0, 0);
    CHECK_THROWS_AS(data::stratified_split(all, {0.5, 0.1, 20, 0}), InvalidSpecError);
    CHECK_THROWS_AS(data::stratified_split(all, {0.8, 0.3, 1, 0}), InvalidSpecError);
    CHECK_THROWS_AS(data::stratified_split(all, {0.0, 0.1, 1, 0}), InvalidSpecError);
    CHECK_THROWS_AS(data::stratified_split(all, {0.5, 0.1, 0, 0}), InvalidSpecError);
  }

  TEST_CASE("CSV round trip is exact") {
    const auto dir = testing::scratch_dir("csv");
    auto s = data::generate_blobs(3, 4, 20, 1.0, 8);
    s.features(0, 0) = 0.1;
    s.features(1, 1) = -1e-300;
    data::write_csv(s, dir / "s.csv");
    CHECK(data::read_csv(dir / "s.csv") == s);

    std::ofstream(dir / "bad.csv") << "# classes=3\nx0,x1,label\n0.5,abc,1\n";
    CHECK_THROWS_AS(data::read_csv(dir / "bad.csv"), FormatError);
    std::ofstream(dir / "nohdr.csv") << "x0,x1,label\n0.5,1,1\n";
    CHECK_THROWS_AS(data::read_csv(dir / "nohdr.csv"), FormatError);
    std::ofstream(dir / "lbl.csv") << "# classes=2\nx0,x1,label\n0.5,1,7\n";
    CHECK_THROWS_AS(data::read_csv(dir / "lbl.csv"), Error);
  }
}
