#include "sdr/grid.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sdr {

namespace {

double parse_finite(const std::string& text, const char* what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    fail(ErrorCode::InvalidInput,
         std::string(what) + " bound is not a finite number: " + text);
  return v;
}

std::pair<double, double> parse_range(const std::string& text,
                                      const char* what) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos)
    fail(ErrorCode::InvalidInput,
         std::string("bounds range needs lo:hi, got ") + text);
  const double lo = parse_finite(text.substr(0, colon), what);
  const double hi = parse_finite(text.substr(colon + 1), what);
  if (!(lo < hi))
    fail(ErrorCode::InvalidInput,
         std::string(what) + " range must satisfy lo < hi: " + text);
  return {lo, hi};
}

}  // namespace

Bounds parse_bounds(const std::string& text) {
  const size_t comma = text.find(',');
  if (comma == std::string::npos)
    fail(ErrorCode::InvalidInput,
         "bounds must be x0:x1,y0:y1, got " + text);
  Bounds b;
  std::tie(b.x0, b.x1) = parse_range(text.substr(0, comma), "x");
  std::tie(b.y0, b.y1) = parse_range(text.substr(comma + 1), "y");
  return b;
}

GridReport rasterize(const SemidefRepresentation& s, const Bounds& bounds,
                     int res, const EngineConfig& cfg) {
  if (s.visible.size() != 2)
    fail(ErrorCode::UnsupportedDimension,
         "grid rendering needs exactly 2 visible variables, set has " +
             std::to_string(s.visible.size()));
  if (res < 2)
    fail(ErrorCode::InvalidInput, "grid resolution must be at least 2");

  GridReport report;
  report.bounds = bounds;
  report.res = res;
  report.cells.resize(static_cast<size_t>(res) * res, VerdictKind::Unknown);

  const double dx = (bounds.x1 - bounds.x0) / (res - 1);
  const double dy = (bounds.y1 - bounds.y0) / (res - 1);
  const auto start = std::chrono::steady_clock::now();
  Assignment point;
  for (int iy = 0; iy < res; ++iy) {
    for (int ix = 0; ix < res; ++ix) {
      point[s.visible[0]] = bounds.x0 + ix * dx;
      point[s.visible[1]] = bounds.y0 + iy * dy;
      const Verdict v = membership(s, point, cfg);
      report.cells[static_cast<size_t>(iy) * res + ix] = v.kind;
      switch (v.kind) {
        case VerdictKind::In: ++report.in_count; break;
        case VerdictKind::Out: ++report.out_count; break;
        case VerdictKind::Unknown: ++report.unknown_count; break;
      }
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::string to_csv(const GridReport& report) {
  std::ostringstream out;
  out << "x,y,verdict\n";
  const double dx = (report.bounds.x1 - report.bounds.x0) / (report.res - 1);
  const double dy = (report.bounds.y1 - report.bounds.y0) / (report.res - 1);
  for (int iy = 0; iy < report.res; ++iy)
    for (int ix = 0; ix < report.res; ++ix)
      out << format_double(report.bounds.x0 + ix * dx) << ','
          << format_double(report.bounds.y0 + iy * dy) << ','
          << verdict_name(report.at(ix, iy)) << '\n';
  return out.str();
}

std::string to_svg(const GridReport& report) {
  const int res = report.res;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << res
      << ' ' << res << "\" width=\"" << 4 * res << "\" height=\"" << 4 * res
      << "\">\n";
  out << "  <defs>\n"
         "    <pattern id=\"hatch\" width=\"0.5\" height=\"0.5\" "
         "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">\n"
         "      <rect width=\"0.5\" height=\"0.5\" fill=\"#f6ad55\"/>\n"
         "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0.5\" "
         "stroke=\"#ffffff\" stroke-width=\"0.12\"/>\n"
         "    </pattern>\n"
         "  </defs>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << res << "\" height=\"" << res
      << "\" fill=\"#ffffff\"/>\n";
  for (int iy = 0; iy < res; ++iy) {
    for (int ix = 0; ix < res; ++ix) {
      const VerdictKind kind = report.at(ix, iy);
      if (kind == VerdictKind::Out) continue;
      const char* fill =
          kind == VerdictKind::In ? "#2b6cb0" : "url(#hatch)";
      // SVG y grows downward; grid iy grows upward.
      out << "  <rect x=\"" << ix << "\" y=\"" << res - 1 - iy
          << "\" width=\"1\" height=\"1\" fill=\"" << fill << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sdr
