#include "artseg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace artseg {

const char* orientation_name(Orientation o) noexcept {
  return o == Orientation::Vertical ? "vertical" : "horizontal";
}

const char* origin_name(SeparatorOrigin o) noexcept {
  switch (o) {
    case SeparatorOrigin::Detected: return "detected";
    case SeparatorOrigin::Connected: return "connected";
    case SeparatorOrigin::Prolonged: return "prolonged";
  }
  return "?";
}

namespace {

void sort_and_number(std::vector<Separator>& seps) {
  std::sort(seps.begin(), seps.end(), [](const Separator& a, const Separator& b) {
    if (a.position != b.position) return a.position < b.position;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  for (std::size_t i = 0; i < seps.size(); ++i) seps[i].id = int(i);
}

bool covers(int start, int end, int a, int b) { return start <= a && end >= b; }

}  // namespace

SeparatorMask build_separator_mask(std::span<const EntityComponent> components, int maxThickness) {
  SeparatorMask mask;
  for (const auto& c : components) {
    const auto& b = c.bbox;
    switch (c.label) {
      case InformativeLabel::VerticalSeparator:
      case InformativeLabel::HorizontalSeparator: {
        const bool vertical = c.label == InformativeLabel::VerticalSeparator;
        const int thickness = vertical ? b.width() : b.height();
        if (thickness > maxThickness) {
          mask.diagnostics.push_back(
              {"ComponentTooThick",
               std::string(vertical ? "vertical" : "horizontal") + " separator at (" +
                   std::to_string(b.x0) + "," + std::to_string(b.y0) + ") is " +
                   std::to_string(thickness) + " px thick (max " + std::to_string(maxThickness) +
                   "); demoted to noise"});
          break;
        }
        Separator s;
        s.orientation = vertical ? Orientation::Vertical : Orientation::Horizontal;
        s.position = vertical ? (b.x0 + b.x1 - 1) / 2 : (b.y0 + b.y1 - 1) / 2;
        s.start = vertical ? b.y0 : b.x0;
        s.end = vertical ? b.y1 : b.x1;
        s.thickness = thickness;
        s.detectedStart = s.start;
        s.detectedEnd = s.end;
        (vertical ? mask.verticals : mask.horizontals).push_back(s);
        break;
      }
      case InformativeLabel::Title:
        mask.titles.push_back({0, b, c.pixels});
        break;
      default:
        break;
    }
  }
  sort_and_number(mask.verticals);
  sort_and_number(mask.horizontals);
  std::sort(mask.titles.begin(), mask.titles.end(), [](const TitleBlock& a, const TitleBlock& b) {
    return a.bbox.y0 != b.bbox.y0 ? a.bbox.y0 < b.bbox.y0 : a.bbox.x0 < b.bbox.x0;
  });
  for (std::size_t i = 0; i < mask.titles.size(); ++i) mask.titles[i].id = int(i);
  return mask;
}

SeparatorMask build_separator_mask(const EntityImage& entity, Connectivity connectivity, int maxThickness) {
  auto components = entity_components(entity, connectivity);
  return build_separator_mask(components, maxThickness);
}

std::vector<Separator> connect_collinear(std::span<const Separator> separators, double gapTol,
                                         double offsetTol) {
  const std::size_t n = separators.size();
  detail::DisjointSets sets;
  for (std::size_t i = 0; i < n; ++i) sets.make();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = separators[i];
      const auto& b = separators[j];
      if (std::abs(a.position - b.position) > offsetTol) continue;
      const int gap = std::max(a.start, b.start) - std::min(a.end, b.end);
      if (gap <= gapTol) sets.join(int(i), int(j));
    }
  }

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(int(i))].push_back(i);

  std::vector<Separator> out;
  for (const auto& [root, members] : groups) {
    Separator merged = separators[members.front()];
    if (members.size() > 1) {
      double weighted = 0.0;
      double total = 0.0;
      for (auto i : members) {
        const auto& s = separators[i];
        merged.start = std::min(merged.start, s.start);
        merged.end = std::max(merged.end, s.end);
        merged.detectedStart = std::min(merged.detectedStart, s.detectedStart);
        merged.detectedEnd = std::max(merged.detectedEnd, s.detectedEnd);
        const double len = std::max(1, s.length());
        weighted += len * s.position;
        total += len;
      }
      merged.position = int(std::lround(weighted / total));
      // the merged stroke covers every fragment's rows
      int reach = 0;
      for (auto i : members) {
        const auto& s = separators[i];
        reach = std::max({reach, merged.position - (s.position - (s.thickness - 1) / 2),
                          s.position + s.thickness / 2 - merged.position});
      }
      merged.thickness = 2 * reach + 1;
      merged.origin = SeparatorOrigin::Connected;
      merged.detectedStart = merged.start;
      merged.detectedEnd = merged.end;
    }
    out.push_back(merged);
  }
  sort_and_number(out);
  return out;
}

SeparatorGrid prolong_verticals(SeparatorGrid grid) {
  const auto& page = grid.pageBox;
  for (auto& v : grid.verticals) {
    const int x = v.position;
    int up = page.y0;
    int down = page.y1;
    for (const auto& h : grid.horizontals) {
      if (h.start > x || h.end < x) continue;
      const int lo = h.position - (h.thickness - 1) / 2;
      const int hi = h.position + h.thickness / 2;
      if (h.position <= v.start)
        up = std::max(up, h.position);
      else if (v.start >= lo)
        up = std::max(up, v.start);  // end already inside the stroke
      if (h.position >= v.end)
        down = std::min(down, h.position);
      else if (v.end <= hi + 1)
        down = std::min(down, v.end);
    }
    for (const auto& t : grid.titles) {
      if (x < t.bbox.x0 || x >= t.bbox.x1) continue;
      if (t.bbox.y1 <= v.start) up = std::max(up, t.bbox.y1);
      if (t.bbox.y0 >= v.end) down = std::min(down, t.bbox.y0);
    }
    up = std::min(up, v.start);
    down = std::max(down, v.end);
    if (up != v.start || down != v.end) {
      v.start = up;
      v.end = down;
      v.origin = SeparatorOrigin::Prolonged;
    }
  }
  return grid;
}

namespace {

// Extends [start, end] at height y left and right until a vertical whose
// extent touches y, or the page edge.
std::pair<int, int> extend_horizontally(int y, int start, int end, const SeparatorGrid& grid) {
  int left = grid.pageBox.x0;
  int right = grid.pageBox.x1;
  for (const auto& v : grid.verticals) {
    if (v.start > y || v.end < y) continue;
    if (v.position <= start) left = std::max(left, v.position);
    if (v.position >= end) right = std::min(right, v.position);
  }
  return {std::min(left, start), std::max(right, end)};
}

}  // namespace

SeparatorGrid prolong_horizontals_and_titles(SeparatorGrid grid) {
  for (auto& h : grid.horizontals) {
    auto [left, right] = extend_horizontally(h.position, h.start, h.end, grid);
    if (left != h.start || right != h.end) {
      h.start = left;
      h.end = right;
      h.origin = SeparatorOrigin::Prolonged;
    }
  }
  grid.titleSegments.clear();
  for (const auto& t : grid.titles) {
    auto [left, right] = extend_horizontally(t.bbox.y0, t.bbox.x0, t.bbox.x1, grid);
    grid.titleSegments.push_back({t.id, t.bbox.y0, left, right});
  }
  return grid;
}

SeparatorGrid generate_grid(const SeparatorMask& mask, Rect pageBox, const GridOptions& options) {
  SeparatorGrid grid;
  grid.pageBox = pageBox;
  grid.titles = mask.titles;
  grid.horizontals = mask.horizontals;
  grid.verticals = connect_collinear(mask.verticals, options.gapTol, options.offsetTol);
  grid = prolong_verticals(std::move(grid));
  grid.horizontals = connect_collinear(grid.horizontals, options.gapTol, options.offsetTol);
  return prolong_horizontals_and_titles(std::move(grid));
}

namespace {

struct Seg {
  int position;
  int start;
  int end;
};

}  // namespace

std::vector<GridBox> extract_grid_boxes(const SeparatorGrid& grid) {
  const auto& page = grid.pageBox;
  std::vector<Seg> vsegs;
  std::vector<Seg> hsegs;
  for (const auto& v : grid.verticals) {
    if (v.position <= page.x0 || v.position >= page.x1) continue;
    int s = std::max(v.start, page.y0), e = std::min(v.end, page.y1);
    if (s < e) vsegs.push_back({v.position, s, e});
  }
  auto add_h = [&](int y, int start, int end) {
    if (y <= page.y0 || y >= page.y1) return;
    int s = std::max(start, page.x0), e = std::min(end, page.x1);
    if (s < e) hsegs.push_back({y, s, e});
  };
  for (const auto& h : grid.horizontals) add_h(h.position, h.start, h.end);
  for (const auto& t : grid.titleSegments) add_h(t.y, t.start, t.end);

  std::vector<int> xs{page.x0, page.x1};
  std::vector<int> ys{page.y0, page.y1};
  for (const auto& v : vsegs) {
    xs.push_back(v.position);
    ys.push_back(v.start);
    ys.push_back(v.end);
  }
  for (const auto& h : hsegs) {
    ys.push_back(h.position);
    xs.push_back(h.start);
    xs.push_back(h.end);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  const int nx = int(xs.size()) - 1;
  const int ny = int(ys.size()) - 1;
  auto cell = [nx](int i, int j) { return j * nx + i; };

  auto walled = [](const std::vector<Seg>& segs, int position, int a, int b) {
    for (const auto& s : segs)
      if (s.position == position && covers(s.start, s.end, a, b)) return true;
    return false;
  };

  detail::DisjointSets sets;
  for (int k = 0; k < nx * ny; ++k) sets.make();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx && !walled(vsegs, xs[std::size_t(i + 1)], ys[std::size_t(j)], ys[std::size_t(j + 1)]))
        sets.join(cell(i, j), cell(i + 1, j));
      if (j + 1 < ny && !walled(hsegs, ys[std::size_t(j + 1)], xs[std::size_t(i)], xs[std::size_t(i + 1)]))
        sets.join(cell(i, j), cell(i, j + 1));
    }
  }

  // Regions are rectangles whenever every segment ends on another segment
  // or the page edge; otherwise they are cut into maximal row-major
  // rectangles so the boxes still tile the page.
  std::vector<int> region(std::size_t(nx * ny));
  for (int k = 0; k < nx * ny; ++k) region[std::size_t(k)] = sets.find(k);
  std::vector<bool> used(std::size_t(nx * ny), false);
  std::vector<GridBox> boxes;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (used[std::size_t(cell(i, j))]) continue;
      const int r = region[std::size_t(cell(i, j))];
      int i1 = i;
      while (i1 + 1 < nx && !used[std::size_t(cell(i1 + 1, j))] && region[std::size_t(cell(i1 + 1, j))] == r) ++i1;
      int j1 = j;
      for (;;) {
        if (j1 + 1 >= ny) break;
        bool row_ok = true;
        for (int ii = i; ii <= i1 && row_ok; ++ii)
          row_ok = !used[std::size_t(cell(ii, j1 + 1))] && region[std::size_t(cell(ii, j1 + 1))] == r;
        if (!row_ok) break;
        ++j1;
      }
      for (int jj = j; jj <= j1; ++jj)
        for (int ii = i; ii <= i1; ++ii) used[std::size_t(cell(ii, jj))] = true;
      GridBox box;
      box.bbox = {xs[std::size_t(i)], ys[std::size_t(j)], xs[std::size_t(i1 + 1)], ys[std::size_t(j1 + 1)]};
      boxes.push_back(std::move(box));
    }
  }
  std::sort(boxes.begin(), boxes.end(), [](const GridBox& a, const GridBox& b) {
    return a.bbox.y0 != b.bbox.y0 ? a.bbox.y0 < b.bbox.y0 : a.bbox.x0 < b.bbox.x0;
  });
  for (std::size_t k = 0; k < boxes.size(); ++k) boxes[k].id = int(k);
  return boxes;
}

namespace {

// Index of the box fully containing `r`, else the one with maximal overlap.
std::size_t host_box(const std::vector<GridBox>& boxes, const Rect& r) {
  std::size_t best = 0;
  std::int64_t best_overlap = -1;
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    if (boxes[k].bbox.contains(r)) return k;
    auto o = overlap_area(boxes[k].bbox, r);
    if (o > best_overlap) {
      best_overlap = o;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::vector<GridBox> assign_content(std::vector<GridBox> boxes, std::span<const TextLine> lines,
                                    std::span<const TitleBlock> titles, const SeparatorGrid& grid) {
  if (boxes.empty()) return boxes;
  for (auto& b : boxes) {
    b.textLines.clear();
    b.titles.clear();
    b.hasTitle = false;
  }
  for (const auto& line : lines) boxes[host_box(boxes, line.bbox)].textLines.push_back(line.id);
  for (const auto& t : titles) boxes[host_box(boxes, t.bbox)].titles.push_back(t.id);

  for (auto& b : boxes) {
    b.hasTitle = !b.titles.empty();
    if (b.hasTitle) continue;
    for (const auto& seg : grid.titleSegments) {
      if (seg.y != b.bbox.y0 || !covers(seg.start, seg.end, b.bbox.x0, b.bbox.x1)) continue;
      auto it = std::find_if(titles.begin(), titles.end(),
                             [&](const TitleBlock& t) { return t.id == seg.titleId; });
      if (it != titles.end() && overlap_area(it->bbox, b.bbox) > 0) {
        b.hasTitle = true;
        break;
      }
    }
  }

  std::erase_if(boxes, [](const GridBox& b) { return b.textLines.empty(); });
  for (std::size_t k = 0; k < boxes.size(); ++k) boxes[k].id = int(k);
  return boxes;
}

std::optional<Delimiter> top_delimiter(const Rect& box, const SeparatorGrid& grid) {
  std::optional<Delimiter> best;
  auto consider = [&](Delimiter d) {
    if (!best || d.length > best->length) best = d;
  };
  if (box.y0 == grid.pageBox.y0) consider({kPageTopDelimiter, false, grid.pageBox.width()});
  for (const auto& h : grid.horizontals)
    if (h.position == box.y0 && covers(h.start, h.end, box.x0, box.x1)) consider({h.id, false, h.length()});
  for (const auto& t : grid.titleSegments)
    if (t.y == box.y0 && covers(t.start, t.end, box.x0, box.x1)) consider({t.titleId, true, t.length()});
  return best;
}

std::vector<SegmentKey> normalized_segments(const SeparatorGrid& grid) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_line;
  for (const auto& v : grid.verticals) by_line[{0, v.position}].push_back({v.start, v.end});
  for (const auto& h : grid.horizontals) by_line[{1, h.position}].push_back({h.start, h.end});
  for (const auto& t : grid.titleSegments) by_line[{2, t.y}].push_back({t.start, t.end});

  std::vector<SegmentKey> out;
  for (auto& [key, spans] : by_line) {
    std::sort(spans.begin(), spans.end());
    auto cur = spans.front();
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first <= cur.second) {
        cur.second = std::max(cur.second, spans[i].second);
      } else {
        out.emplace_back(key.first, key.second, cur.first, cur.second);
        cur = spans[i];
      }
    }
    out.emplace_back(key.first, key.second, cur.first, cur.second);
  }
  return out;
}

}  // namespace artseg
