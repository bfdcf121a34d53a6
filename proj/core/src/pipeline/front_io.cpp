#include "evoprune/pipeline/front_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "evoprune/bitmask.hpp"
#include "evoprune/error.hpp"

namespace evoprune::pipeline {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const fs::path& path, std::size_t line, const std::string& what) {
  throw FormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

class Reader {
 public:
  explicit Reader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw IoError("cannot open " + path.string());
  }

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }
  const fs::path& path() const { return path_; }

  double to_double(const std::string& s) const {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) bad(path_, line_no_, "not a number: '" + s + "'");
    return v;
  }

  template <typename Int>
  Int to_int(const std::string& s) const {
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
      bad(path_, line_no_, "not an integer: '" + s + "'");
    }
    return v;
  }

  // "# <magic> key=value ..." -> key/value map
  std::map<std::string, std::string> header(const std::string& magic) {
    std::string line;
    if (!next(line)) bad(path_, line_no_, "missing header line");
    std::istringstream in(line);
    std::string hash, tag;
    in >> hash >> tag;
    if (hash != "#" || tag != magic) bad(path_, line_no_, "expected '# " + magic + "' header");
    std::map<std::string, std::string> kv;
    for (std::string tok; in >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) bad(path_, line_no_, "malformed header token '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    const auto v = kv.find("version");
    if (v == kv.end() || to_int<int>(v->second) != kFrontFormatVersion) {
      bad(path_, line_no_, "unsupported format version");
    }
    return kv;
  }

  const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) const {
    const auto it = kv.find(key);
    if (it == kv.end()) bad(path_, line_no_, "header is missing '" + key + "'");
    return it->second;
  }

  void columns(const std::string& expected) {
    std::string line;
    if (!next(line) || line != expected) bad(path_, line_no_, "expected column header '" + expected + "'");
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

constexpr const char* kP1Columns = "th1,th2,f1,f2_opt,f2_val,seed,generation";
constexpr const char* kP2Columns = "f1,f2_opt,f2_val,popcount,engine,seed,generation";
constexpr const char* kMaskMagic = "evoprune-masks";

}  // namespace

void write_p1(const fs::path& path, const P1File& file) {
  auto out = open_out(path);
  out << "# evoprune-p1 version=" << kFrontFormatVersion << " f1_ref=" << file.f1_ref << " seed=" << file.seed
      << "\n"
      << kP1Columns << "\n";
  for (const auto& s : file.solutions) {
    out << num(s.th1) << ',' << num(s.th2) << ',' << s.f1 << ',' << num(s.f2_opt) << ',' << num(s.f2_val) << ','
        << s.seed << ',' << s.generation << "\n";
  }
  finish(out, path);
}

P1File read_p1(const fs::path& path) {
  Reader r(path);
  const auto kv = r.header("evoprune-p1");
  P1File file;
  file.f1_ref = r.to_int<std::int64_t>(r.field(kv, "f1_ref"));
  file.seed = r.to_int<std::uint64_t>(r.field(kv, "seed"));
  r.columns(kP1Columns);
  for (std::string line; r.next(line);) {
    const auto f = split(line, ',');
    if (f.size() != 7) bad(path, r.line_no(), "expected 7 fields, got " + std::to_string(f.size()));
    phase1::ThresholdSolution s;
    s.th1 = r.to_double(f[0]);
    s.th2 = r.to_double(f[1]);
    s.f1 = r.to_int<std::int64_t>(f[2]);
    s.f2_opt = r.to_double(f[3]);
    s.f2_val = r.to_double(f[4]);
    s.seed = r.to_int<std::uint64_t>(f[5]);
    s.generation = r.to_int<int>(f[6]);
    file.solutions.push_back(s);
  }
  return file;
}

void write_p2(const fs::path& path, const P2File& file) {
  const auto& h = file.header;
  auto out = open_out(path);
  out << "# evoprune-p2 version=" << kFrontFormatVersion << " f1_ref=" << h.f1_ref << " seed=" << h.seed
      << " engine=" << h.engine << " heavy_index=" << h.heavy_index << " light_index=" << h.light_index
      << " heavy_th1=" << num(h.heavy_th1) << " heavy_th2=" << num(h.heavy_th2) << " heavy_f1=" << h.heavy_f1
      << " light_f1=" << h.light_f1 << " light_f2_val=" << num(h.light_f2_val) << " masks=" << h.masks << "\n"
      << kP2Columns << "\n";
  for (const auto& s : file.solutions) {
    out << s.f1 << ',' << num(s.f2_opt) << ',' << num(s.f2_val) << ',' << s.popcount << ',' << s.engine << ','
        << s.seed << ',' << s.generation << "\n";
  }
  finish(out, path);

  const fs::path mask_path = path.parent_path() / h.masks;
  auto masks = open_out(mask_path);
  masks << "# " << kMaskMagic << " version=" << kFrontFormatVersion << " count=" << file.solutions.size() << "\n";
  for (const auto& s : file.solutions) masks << (s.mask.size() == 0 ? "-" : rle_encode(s.mask)) << "\n";
  finish(masks, mask_path);
}

P2File read_p2(const fs::path& path) {
  std::error_code ec;
  if (fs::exists(path, ec) && fs::file_size(path, ec) == 0 && !ec) return {};

  Reader r(path);
  const auto kv = r.header("evoprune-p2");
  P2File file;
  auto& h = file.header;
  h.f1_ref = r.to_int<std::int64_t>(r.field(kv, "f1_ref"));
  h.seed = r.to_int<std::uint64_t>(r.field(kv, "seed"));
  h.engine = r.field(kv, "engine");
  h.heavy_index = r.to_int<std::size_t>(r.field(kv, "heavy_index"));
  h.light_index = r.to_int<std::size_t>(r.field(kv, "light_index"));
  h.heavy_th1 = r.to_double(r.field(kv, "heavy_th1"));
  h.heavy_th2 = r.to_double(r.field(kv, "heavy_th2"));
  h.heavy_f1 = r.to_int<std::int64_t>(r.field(kv, "heavy_f1"));
  h.light_f1 = r.to_int<std::int64_t>(r.field(kv, "light_f1"));
  h.light_f2_val = r.to_double(r.field(kv, "light_f2_val"));
  h.masks = r.field(kv, "masks");
  r.columns(kP2Columns);
  for (std::string line; r.next(line);) {
    const auto f = split(line, ',');
    if (f.size() != 7) bad(path, r.line_no(), "expected 7 fields, got " + std::to_string(f.size()));
    phase2::MaskSolution s;
    s.f1 = r.to_int<std::int64_t>(f[0]);
    s.f2_opt = r.to_double(f[1]);
    s.f2_val = r.to_double(f[2]);
    s.popcount = r.to_int<std::int64_t>(f[3]);
    s.engine = f[4];
    s.seed = r.to_int<std::uint64_t>(f[5]);
    s.generation = r.to_int<int>(f[6]);
    file.solutions.push_back(std::move(s));
  }

  const fs::path mask_path = path.parent_path() / h.masks;
  Reader m(mask_path);
  const auto mkv = m.header(kMaskMagic);
  const auto count = m.to_int<std::size_t>(m.field(mkv, "count"));
  if (count != file.solutions.size()) {
    bad(mask_path, m.line_no(), "mask count " + std::to_string(count) + " does not match " +
                                    std::to_string(file.solutions.size()) + " solutions");
  }
  for (auto& s : file.solutions) {
    std::string line;
    if (!m.next(line)) bad(mask_path, m.line_no(), "missing mask line");
    try {
      s.mask = line == "-" ? BitMask{} : rle_decode(line);
    } catch (const FormatError& e) {
      bad(mask_path, m.line_no(), e.what());
    }
    if (static_cast<std::int64_t>(s.mask.popcount()) != s.popcount) {
      bad(mask_path, m.line_no(), "mask popcount does not match the P2 row");
    }
  }
  return file;
}

moea::ParetoFront report_front(const P1File& file) {
  moea::ParetoFront front;
  front.phase = "phase1";
  front.seed = file.seed;
  front.normalization = NormalizationSpec{file.f1_ref};
  for (const auto& s : file.solutions) {
    front.members.push_back({moea::Continuous{{s.th1, s.th2}, nullptr},
                             {static_cast<double>(s.f1), s.f2_val},
                             s.generation,
                             "phase1"});
  }
  return front;
}

moea::ParetoFront report_front(const P2File& file) {
  moea::ParetoFront front;
  front.phase = "phase2-" + file.header.engine;
  front.seed = file.header.seed;
  if (file.header.f1_ref > 0) front.normalization = NormalizationSpec{file.header.f1_ref};
  for (const auto& s : file.solutions) {
    front.members.push_back({s.mask, {static_cast<double>(s.f1), s.f2_val}, s.generation, front.phase});
  }
  return front;
}

}  // namespace evoprune::pipeline
