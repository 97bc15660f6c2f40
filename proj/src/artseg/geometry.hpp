#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>

namespace artseg {

struct Point {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Half-open rectangle [x0, x1) x [y0, y1) in pixel coordinates.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  static Rect from_xywh(int x, int y, int w, int h) { return {x, y, x + w, y + h}; }

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  std::int64_t area() const {
    return empty() ? 0 : std::int64_t(width()) * std::int64_t(height());
  }
  bool empty() const { return x1 <= x0 || y1 <= y0; }

  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
  bool contains(Point p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }

  Rect intersected(const Rect& r) const {
    return {std::max(x0, r.x0), std::max(y0, r.y0), std::min(x1, r.x1), std::min(y1, r.y1)};
  }
  Rect united(const Rect& r) const {
    if (empty()) return r;
    if (r.empty()) return *this;
    return {std::min(x0, r.x0), std::min(y0, r.y0), std::max(x1, r.x1), std::max(y1, r.y1)};
  }

  friend auto operator<=>(const Rect&, const Rect&) = default;
};

inline std::int64_t overlap_area(const Rect& a, const Rect& b) {
  return a.intersected(b).area();
}

/// Grows a bounding box to include one pixel.
inline void extend(Rect& box, Point p) {
  if (box.empty()) {
    box = {p.x, p.y, p.x + 1, p.y + 1};
    return;
  }
  box.x0 = std::min(box.x0, p.x);
  box.y0 = std::min(box.y0, p.y);
  box.x1 = std::max(box.x1, p.x + 1);
  box.y1 = std::max(box.y1, p.y + 1);
}

}  // namespace artseg
