#include "evoprune/moea/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "evoprune/error.hpp"

namespace evoprune::moea {

void write_trace(const std::vector<GenerationRecord>& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "generation,best_f1,best_f2,hypervolume\n";
  char buf[128];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.generation, r.best_f1, r.best_f2, r.hypervolume);
    out << buf;
  }
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<GenerationRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "generation,best_f1,best_f2,hypervolume") {
    throw FormatError(path.string() + ": unexpected trace header");
  }
  std::vector<GenerationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    GenerationRecord r;
    char c1, c2, c3;
    std::string hv;
    std::istringstream ss(line);
    if (!(ss >> r.generation >> c1 >> r.best_f1 >> c2 >> r.best_f2 >> c3 >> hv) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw FormatError(path.string() + ": bad trace row '" + line + "'");
    }
    r.hypervolume = std::strtod(hv.c_str(), nullptr);
    out.push_back(r);
  }
  return out;
}

}  // namespace evoprune::moea
