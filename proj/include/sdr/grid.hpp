#pragma once

#include <string>
#include <vector>

#include "sdr/feasibility.hpp"
#include "sdr/pencil.hpp"

namespace sdr {

// Axis-aligned rectangle x0 <= x <= x1, y0 <= y <= y1.
struct Bounds {
  double x0 = -1.5;
  double x1 = 1.5;
  double y0 = -1.5;
  double y1 = 1.5;
};

// Parses "x0:x1,y0:y1"; each bound must be finite and the ranges non-empty.
Bounds parse_bounds(const std::string& text);

// Membership verdicts on a res-by-res grid of sample points. Cell (ix, iy)
// holds the verdict at (x0 + ix*dx, y0 + iy*dy) with both endpoints included;
// storage is row-major in iy.
struct GridReport {
  Bounds bounds;
  int res = 0;
  std::vector<VerdictKind> cells;
  int in_count = 0;
  int out_count = 0;
  int unknown_count = 0;
  double seconds = 0.0;

  VerdictKind at(int ix, int iy) const {
    return cells[static_cast<size_t>(iy) * res + ix];
  }
};

// Evaluates membership at every grid point. The representation must have
// exactly two visible variables; the first maps to the x axis.
GridReport rasterize(const SemidefRepresentation& s, const Bounds& bounds,
                     int res, const EngineConfig& cfg = {});

// "x,y,verdict" per grid point, bottom row first.
std::string to_csv(const GridReport& report);

// Self-contained SVG, one unit square per cell: membership in solid blue,
// exterior white, unknown in hatched orange.
std::string to_svg(const GridReport& report);

}  // namespace sdr
