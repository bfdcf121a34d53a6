#include "evoprune/pipeline/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "evoprune/error.hpp"

namespace evoprune::pipeline {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (std::abs(v) >= 1000) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  }
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xr.add(p.f1);
      yr.add(p.f2);
    }
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n"
    << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
    << R"(" font-family="sans-serif" font-size="12">)" << "\n"
    << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n"
    << R"(<text x=")" << fmt(kLeft + pw / 2) << R"(" y="24" text-anchor="middle" font-size="15">)" << esc(title)
    << "</text>\n";

  o << R"(<rect x=")" << kLeft << R"(" y=")" << kTop << R"(" width=")" << pw << R"(" height=")" << ph
    << R"(" fill="none" stroke="black"/>)" << "\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    o << R"(<line x1=")" << fmt(sx(xv)) << R"(" y1=")" << fmt(kTop + ph) << R"(" x2=")" << fmt(sx(xv))
      << R"(" y2=")" << fmt(kTop + ph + 5) << R"(" stroke="black"/>)"
      << R"(<text x=")" << fmt(sx(xv)) << R"(" y=")" << fmt(kTop + ph + 18) << R"(" text-anchor="middle">)"
      << tick_label(xv) << "</text>\n";
    o << R"(<line x1=")" << fmt(kLeft - 5) << R"(" y1=")" << fmt(sy(yv)) << R"(" x2=")" << kLeft << R"(" y2=")"
      << fmt(sy(yv)) << R"(" stroke="black"/>)"
      << R"(<text x=")" << fmt(kLeft - 8) << R"(" y=")" << fmt(sy(yv) + 4) << R"(" text-anchor="end">)"
      << tick_label(yv) << "</text>\n";
  }
  o << R"(<text x=")" << fmt(kLeft + pw / 2) << R"(" y=")" << fmt(kHeight - 15)
    << R"(" text-anchor="middle">nonzero weights</text>)" << "\n";
  o << R"(<text x="20" y=")" << fmt(kTop + ph / 2) << R"(" text-anchor="middle" transform="rotate(-90 20 )"
    << fmt(kTop + ph / 2) << R"lit()">error</text>)lit" << "\n";

  double ly = kTop + 10;
  for (const auto& s : series) {
    o << R"(<g fill=")" << esc(s.color) << R"(" stroke=")" << esc(s.color) << R"(">)" << "\n";
    if (s.connect && s.points.size() > 1) {
      auto pts = s.points;
      std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.f1 < b.f1; });
      o << R"(<polyline fill="none" stroke-width="1.5" points=")";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) o << fmt(sx(pts[i].f1)) << ',' << fmt(sy(pts[i - 1].f2)) << ' ';
        o << fmt(sx(pts[i].f1)) << ',' << fmt(sy(pts[i].f2)) << ' ';
      }
      o << R"("/>)" << "\n";
    }
    for (const auto& p : s.points) {
      o << R"(<circle cx=")" << fmt(sx(p.f1)) << R"(" cy=")" << fmt(sy(p.f2)) << R"(" r=")" << fmt(s.radius)
        << R"(" fill-opacity="0.7"/>)" << "\n";
    }
    o << R"(<circle cx=")" << fmt(kWidth - kRight + 20) << R"(" cy=")" << fmt(ly) << R"(" r="4"/>)"
      << R"(<text x=")" << fmt(kWidth - kRight + 30) << R"(" y=")" << fmt(ly + 4) << R"(" stroke="none">)"
      << esc(s.label) << "</text>\n</g>\n";
    ly += 18;
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << render_svg(series, title);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace evoprune::pipeline
