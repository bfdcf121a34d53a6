#include "evoprune/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "evoprune/rng.hpp"

namespace evoprune::data {

namespace fs = std::filesystem;

void LabeledSet::validate() const {
  if (features.rows != labels.size()) throw ShapeError("label count does not match feature rows");
  if (classes < 1) throw InvalidSpecError("classes must be >= 1");
  for (int y : labels) {
    if (y < 0 || y >= classes) throw InvalidSpecError("label " + std::to_string(y) + " outside [0, classes)");
  }
}

LabeledSet LabeledSet::subset(const std::vector<std::size_t>& indices) const {
  LabeledSet out;
  out.classes = classes;
  out.features = nn::Tensor2(indices.size(), features.cols);
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    auto src = features.row(indices[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(labels[indices[r]]);
  }
  return out;
}

std::vector<std::size_t> LabeledSet::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0) || !(val_fraction > 0.0)) throw InvalidSpecError("split fractions must be positive");
  if (train_fraction + val_fraction > 1.0) throw InvalidSpecError("split fractions sum above 1");
  if (opt_per_class < 1) throw InvalidSpecError("opt_per_class must be >= 1");
}

LabeledSet generate_blobs(int classes, int dim, int per_class, double spread, std::uint64_t seed) {
  if (classes < 2 || dim < 2 || per_class < 2) throw InvalidSpecError("blobs need classes, dim, per_class >= 2");
  if (classes > 2 * dim) throw InvalidSpecError("blobs support at most 2 * dim classes");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw InvalidSpecError("spread must be finite and >= 0");

  // Means at +-a e_i: every pair is at least a*sqrt(2) apart.
  const double separation = 4.0 * spread + 4.0;
  const double a = separation / std::sqrt(2.0);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  LabeledSet set;
  set.classes = classes;
  set.features = nn::Tensor2(static_cast<std::size_t>(classes * per_class), static_cast<std::size_t>(dim));
  set.labels.reserve(set.features.rows);
  std::size_t r = 0;
  for (int c = 0; c < classes; ++c) {
    const int axis = c % dim;
    const double sign = c < dim ? 1.0 : -1.0;
    for (int i = 0; i < per_class; ++i, ++r) {
      auto row = set.features.row(r);
      for (int d = 0; d < dim; ++d) {
        row[static_cast<std::size_t>(d)] = (d == axis ? sign * a : 0.0) + spread * noise(rng);
      }
      set.labels.push_back(c);
    }
  }
  standardize(set);
  return set;
}

void standardize(LabeledSet& set) {
  const std::size_t n = set.features.rows;
  if (n == 0) return;
  for (std::size_t d = 0; d < set.features.cols; ++d) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += set.features(r, d);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double z = set.features(r, d) - mean;
      var += z * z;
    }
    var /= static_cast<double>(n);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t r = 0; r < n; ++r) set.features(r, d) = (set.features(r, d) - mean) * scale;
  }
}

namespace {

// Splits round(fraction * total) over classes in proportion to `counts`
// using largest remainders (ties to the lower class index).
std::vector<std::size_t> allocate(const std::vector<std::size_t>& counts, double fraction) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  std::vector<std::size_t> out(counts.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double exact = static_cast<double>(target) * static_cast<double>(counts[c]) / static_cast<double>(total);
    out[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[c];
    rem.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < target && k < rem.size(); ++k, ++assigned) ++out[rem[k].second];
  return out;
}

}  // namespace

Split stratified_split(const LabeledSet& data, const SplitSpec& spec) {
  spec.validate();
  data.validate();
  if (data.empty()) throw InvalidSpecError("cannot split an empty dataset");

  const auto counts = data.class_counts();
  const auto train_n = allocate(counts, spec.train_fraction);
  const auto val_n = allocate(counts, spec.val_fraction);

  std::vector<std::vector<std::size_t>> by_class(counts.size());
  for (std::size_t r = 0; r < data.size(); ++r) by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);

  Rng rng = make_rng(spec.seed);
  Split s;
  const auto opt_n = static_cast<std::size_t>(spec.opt_per_class);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (opt_n + train_n[c] + val_n[c] > rows.size()) {
      throw InvalidSpecError("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                             " rows, split needs " + std::to_string(opt_n + train_n[c] + val_n[c]));
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    auto it = rows.begin();
    s.opt_rows.insert(s.opt_rows.end(), it, it + static_cast<std::ptrdiff_t>(opt_n));
    it += static_cast<std::ptrdiff_t>(opt_n);
    s.train_rows.insert(s.train_rows.end(), it, it + static_cast<std::ptrdiff_t>(train_n[c]));
    it += static_cast<std::ptrdiff_t>(train_n[c]);
    s.val_rows.insert(s.val_rows.end(), it, it + static_cast<std::ptrdiff_t>(val_n[c]));
    it += static_cast<std::ptrdiff_t>(val_n[c]);
    s.test_rows.insert(s.test_rows.end(), it, rows.end());
  }
  for (auto* rows : {&s.train_rows, &s.val_rows, &s.opt_rows, &s.test_rows}) std::sort(rows->begin(), rows->end());
  s.train = data.subset(s.train_rows);
  s.val = data.subset(s.val_rows);
  s.opt = data.subset(s.opt_rows);
  s.test = data.subset(s.test_rows);
  return s;
}

void write_csv(const LabeledSet& set, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# classes=" << set.classes << '\n';
  for (std::size_t d = 0; d < set.features.cols; ++d) out << 'x' << d << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t r = 0; r < set.size(); ++r) {
    for (double v : set.features.row(r)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << set.labels[r] << '\n';
  }
  if (!out) throw IoError("short write to " + path.string());
}

LabeledSet read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  auto fail = [&](std::size_t line, const std::string& why) {
    return FormatError(path.string() + ":" + std::to_string(line) + ": " + why);
  };

  std::string line;
  LabeledSet set;
  if (!std::getline(in, line) || line.rfind("# classes=", 0) != 0) throw fail(1, "missing '# classes=' line");
  set.classes = std::stoi(line.substr(10));
  if (!std::getline(in, line)) throw fail(2, "missing header row");
  const auto dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (dim == 0 || line.substr(line.rfind(',') + 1) != "label") throw fail(2, "header must end with 'label'");

  std::vector<double> values;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (std::size_t d = 0; d <= dim; ++d) {
      const std::size_t end = d < dim ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw fail(lineno, "too few fields");
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      if (d < dim) {
        // strtod round-trips %.17g exactly.
        char* stop = nullptr;
        const std::string field(first, last);
        const double v = std::strtod(field.c_str(), &stop);
        if (field.empty() || *stop != '\0') throw fail(lineno, "bad number '" + field + "'");
        values.push_back(v);
      } else {
        int y = 0;
        auto [ptr, ec] = std::from_chars(first, last, y);
        if (ec != std::errc{} || ptr != last) throw fail(lineno, "bad label");
        set.labels.push_back(y);
      }
      pos = end + 1;
    }
  }
  set.features = nn::Tensor2(set.labels.size(), dim, std::move(values));
  try {
    set.validate();
  } catch (const Error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return set;
}

}  // namespace evoprune::data
