#include "artseg/textlines.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace artseg {

namespace {

struct RowExtent {
  int y;
  int min_x;
  int max_x;  // inclusive
  int count;
};

// Pixels must be sorted in raster order.
std::vector<RowExtent> row_extents(std::span<const Point> pixels) {
  std::vector<RowExtent> rows;
  for (const auto& p : pixels) {
    if (rows.empty() || rows.back().y != p.y) {
      rows.push_back({p.y, p.x, p.x, 1});
    } else {
      auto& r = rows.back();
      r.min_x = std::min(r.min_x, p.x);
      r.max_x = std::max(r.max_x, p.x);
      ++r.count;
    }
  }
  return rows;
}

std::int64_t cross(Point o, Point a, Point b) {
  return std::int64_t(a.x - o.x) * (b.y - o.y) - std::int64_t(a.y - o.y) * (b.x - o.x);
}

double hull_area_of_rows(std::span<const RowExtent> rows) {
  std::vector<Point> pts;
  pts.reserve(rows.size() * 4);
  for (const auto& r : rows) {
    pts.push_back({r.min_x, r.y});
    pts.push_back({r.min_x, r.y + 1});
    pts.push_back({r.max_x + 1, r.y});
    pts.push_back({r.max_x + 1, r.y + 1});
  }
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0.0;

  // Andrew's monotone chain.
  std::vector<Point> hull(pts.size() * 2);
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);

  std::int64_t twice = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += std::int64_t(a.x) * b.y - std::int64_t(b.x) * a.y;
  }
  return double(twice < 0 ? -twice : twice) / 2.0;
}

double median_of(std::vector<int> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  auto n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

// Dense pieces plus residue pieces, or a single element when no interior
// valley exists.
std::vector<TextLine> split_at_valleys(const TextLine& line, double valley_ratio) {
  auto rows = row_extents(line.pixels);
  std::vector<int> sums;
  sums.reserve(rows.size());
  for (const auto& r : rows) sums.push_back(r.count);
  const double threshold = valley_ratio * median_of(sums);

  // Bands of consecutive rows with the same density class. Row gaps (rows
  // with no pixels at all) count as valley rows.
  struct Band { int y0, y1; bool valley; };
  std::vector<Band> bands;
  auto push = [&](int y0, int y1, bool valley) {
    if (!bands.empty() && bands.back().valley == valley && bands.back().y1 == y0)
      bands.back().y1 = y1;
    else
      bands.push_back({y0, y1, valley});
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].y > rows[i - 1].y + 1) push(rows[i - 1].y + 1, rows[i].y, true);
    push(rows[i].y, rows[i].y + 1, rows[i].count < threshold);
  }
  // Fold leading/trailing valley rows into the neighbouring dense band.
  if (bands.size() > 1 && bands.front().valley) {
    bands[1].y0 = bands.front().y0;
    bands.erase(bands.begin());
  }
  if (bands.size() > 1 && bands.back().valley) {
    bands[bands.size() - 2].y1 = bands.back().y1;
    bands.pop_back();
  }
  if (bands.size() < 3) return {line};

  std::vector<std::vector<Point>> buckets(bands.size());
  std::size_t b = 0;
  for (const auto& p : line.pixels) {
    while (p.y >= bands[b].y1) ++b;
    buckets[b].push_back(p);
  }
  std::vector<TextLine> pieces;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (buckets[i].empty()) continue;
    auto piece = make_text_line(std::move(buckets[i]));
    piece.residue = bands[i].valley;
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace

double convex_hull_area(std::span<const Point> pixels) {
  std::vector<Point> sorted(pixels.begin(), pixels.end());
  std::sort(sorted.begin(), sorted.end(), [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  auto rows = row_extents(sorted);
  return hull_area_of_rows(rows);
}

TextLine make_text_line(std::vector<Point> pixels) {
  std::sort(pixels.begin(), pixels.end(), [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  TextLine line;
  for (const auto& p : pixels) extend(line.bbox, p);
  auto rows = row_extents(pixels);
  line.hullArea = hull_area_of_rows(rows);

  std::vector<int> sums;
  for (const auto& r : rows) sums.push_back(r.count);
  const double half_median = 0.5 * median_of(sums);
  line.baselineY = line.bbox.y1 - 1;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->count >= half_median) {
      line.baselineY = it->y;
      break;
    }
  }
  line.pixels = std::move(pixels);
  return line;
}

void renumber_lines(std::vector<TextLine>& lines) {
  std::stable_sort(lines.begin(), lines.end(), [](const TextLine& a, const TextLine& b) {
    const auto& r = a.bbox;
    const auto& s = b.bbox;
    if (r.y0 != s.y0) return r.y0 < s.y0;
    if (r.x0 != s.x0) return r.x0 < s.x0;
    if (r.y1 != s.y1) return r.y1 < s.y1;
    return r.x1 < s.x1;
  });
  for (std::size_t i = 0; i < lines.size(); ++i) lines[i].id = int(i);
}

std::vector<TextLine> text_lines_from_components(std::span<const EntityComponent> components) {
  std::vector<TextLine> lines;
  for (const auto& c : components)
    if (c.label == InformativeLabel::TextLine) lines.push_back(make_text_line(c.pixels));
  renumber_lines(lines);
  return lines;
}

std::vector<TextLine> extract_text_lines(const EntityImage& entity, Connectivity connectivity) {
  auto components = entity_components(entity, connectivity);
  return text_lines_from_components(components);
}

LineStats compute_line_stats(std::span<const TextLine> lines) {
  LineStats stats;
  stats.count = lines.size();
  if (stats.count == 0) return stats;
  double sum = 0.0;
  for (const auto& l : lines) sum += l.hullArea;
  stats.meanHullArea = sum / double(stats.count);
  return stats;
}

LineStats compute_line_stats(std::span<const std::vector<TextLine>> pages) {
  LineStats stats;
  double sum = 0.0;
  for (const auto& page : pages) {
    for (const auto& l : page) sum += l.hullArea;
    stats.count += page.size();
  }
  if (stats.count > 0) stats.meanHullArea = sum / double(stats.count);
  return stats;
}

std::vector<TextLine> split_merged_lines(std::vector<TextLine> lines, const LineStats& stats,
                                         const SplitOptions& options) {
  if (stats.count == 0 || stats.meanHullArea <= 0.0) return lines;
  const double threshold = options.factor * stats.meanHullArea;

  std::vector<TextLine> done;
  std::vector<TextLine> pending = std::move(lines);
  for (int round = 0; round < options.maxRounds && !pending.empty(); ++round) {
    std::vector<TextLine> next;
    for (auto& line : pending) {
      if (line.residue || line.hullArea <= threshold) {
        done.push_back(std::move(line));
        continue;
      }
      auto pieces = split_at_valleys(line, options.valleyRatio);
      if (pieces.size() == 1) {
        line.oversized = true;
        done.push_back(std::move(line));
        continue;
      }
      for (auto& p : pieces) next.push_back(std::move(p));
    }
    pending = std::move(next);
  }
  for (auto& line : pending) {
    if (!line.residue && line.hullArea > threshold) line.oversized = true;
    done.push_back(std::move(line));
  }
  renumber_lines(done);
  return done;
}

}  // namespace artseg
