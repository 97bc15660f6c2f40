#pragma once

#include "artseg/geometry.hpp"
#include "artseg/labels.hpp"
#include "artseg/smoothing.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace artseg {

struct TextLine {
  int id = 0;
  std::vector<Point> pixels;
  Rect bbox;
  double hullArea = 0.0;
  int baselineY = 0;
  bool residue = false;    // low-density bridge cut out of a merged line
  bool oversized = false;  // still above the split threshold after the last round
};

struct LineStats {
  double meanHullArea = 0.0;
  std::size_t count = 0;
};

struct SplitOptions {
  double factor = 2.5;
  int maxRounds = 3;
  double valleyRatio = 0.2;  // fraction of the median row sum
};

/// Area of the convex hull of the pixel squares: each pixel (x, y) covers
/// [x, x+1] x [y, y+1], so a solid w x h rectangle has area w*h and the hull
/// area is never below the pixel count.
double convex_hull_area(std::span<const Point> pixels);

/// Builds a line from its pixels (bbox, hull area, baseline). Pixels are
/// sorted into raster order.
TextLine make_text_line(std::vector<Point> pixels);

std::vector<TextLine> extract_text_lines(const EntityImage& entity, Connectivity connectivity);
std::vector<TextLine> text_lines_from_components(std::span<const EntityComponent> components);

LineStats compute_line_stats(std::span<const TextLine> lines);
/// Issue-wide statistics over several pages.
LineStats compute_line_stats(std::span<const std::vector<TextLine>> pages);

/// Splits every line whose hull area exceeds factor x mean at interior
/// valleys of its row projection profile. Output pixel sets partition the
/// input pixel sets; ids are reassigned in (top, left) order.
std::vector<TextLine> split_merged_lines(std::vector<TextLine> lines, const LineStats& stats,
                                         const SplitOptions& options = {});

/// Reassigns ids 0..n-1 in (bbox.y0, bbox.x0, bbox.y1, bbox.x1) order.
void renumber_lines(std::vector<TextLine>& lines);

}  // namespace artseg
