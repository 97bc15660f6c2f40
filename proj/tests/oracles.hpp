#pragma once

#include "artseg/articles.hpp"
#include "artseg/eval.hpp"
#include "artseg/grid.hpp"
#include "artseg/smoothing.hpp"
#include "artseg/textlines.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct CheckResult {
  int trials = 0;
  int failures = 0;
  std::string first;
  bool ok() const { return trials > 0 && failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
};

/// Flood fill over non-background pixels, then the per-component vote.
artseg::EntityImage brute_force_smooth(const artseg::LabelImage& image, artseg::Connectivity connectivity,
                                       const artseg::TieOrder& order);

/// Convex hull area of the pixel squares by gift wrapping over corners.
double gift_wrap_hull_area(std::span<const artseg::Point> pixels);

/// connect_collinear by Warshall transitive closure; (position, start, end) sorted.
std::vector<std::tuple<int, int, int>> closure_connect(std::span<const artseg::Separator> separators, double gapTol,
                                                       double offsetTol);

/// Maximum number of disjoint (pred, gt) pairs with IoU >= threshold, by search.
int exhaustive_matches(std::span<const artseg::eval::Region> predicted, std::span<const artseg::eval::Region> gt,
                       double threshold);

/// Area of a union of rectangles by counting covered pixels.
std::int64_t raster_union_area(std::span<const artseg::Rect> rects);

// Randomized equivalence checks shared by the unit tests and the acceptance run.
CheckResult check_smoothing(int grids, std::uint64_t seed);
CheckResult check_box_counts(int arrangements, std::uint64_t seed);
CheckResult check_section_order(int siblingSets, std::uint64_t seed);
CheckResult check_connect_collinear(int trials, std::uint64_t seed);
CheckResult check_matching(int trials, std::uint64_t seed);

}  // namespace oracle
