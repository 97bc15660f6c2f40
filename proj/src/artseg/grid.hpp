#pragma once

#include "artseg/error.hpp"
#include "artseg/geometry.hpp"
#include "artseg/labels.hpp"
#include "artseg/smoothing.hpp"
#include "artseg/textlines.hpp"

#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace artseg {

enum class Orientation { Vertical, Horizontal };
enum class SeparatorOrigin { Detected, Connected, Prolonged };

const char* orientation_name(Orientation o) noexcept;
const char* origin_name(SeparatorOrigin o) noexcept;

/// Axis-aligned ruling. `position` is the stroke centre on the cross axis;
/// [start, end] is the extent along the axis. A detected stroke covering
/// pixel rows y0..y1-1 has start = y0, end = y1.
struct Separator {
  int id = 0;
  Orientation orientation = Orientation::Vertical;
  int position = 0;
  int start = 0;
  int end = 0;
  int thickness = 1;
  SeparatorOrigin origin = SeparatorOrigin::Detected;
  int detectedStart = 0;  // extent before prolongation
  int detectedEnd = 0;

  int length() const { return end - start; }
};

struct TitleBlock {
  int id = 0;
  Rect bbox;
  std::vector<Point> pixels;
};

/// Top edge of a title after horizontal prolongation; cuts the grid but keeps
/// its title identity.
struct TitleSegment {
  int titleId = 0;
  int y = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
};

struct SeparatorGrid {
  std::vector<Separator> verticals;
  std::vector<Separator> horizontals;
  std::vector<TitleBlock> titles;
  std::vector<TitleSegment> titleSegments;
  Rect pageBox;
};

struct GridBox {
  int id = 0;
  Rect bbox;
  std::vector<int> textLines;
  std::vector<int> titles;
  bool hasTitle = false;
};

struct SeparatorMask {
  std::vector<Separator> verticals;
  std::vector<Separator> horizontals;
  std::vector<TitleBlock> titles;
  std::vector<Diagnostic> diagnostics;  // ComponentTooThick
};

struct GridOptions {
  double gapTol = 8.0;
  double offsetTol = 1.5;
};

SeparatorMask build_separator_mask(std::span<const EntityComponent> components, int maxThickness);
SeparatorMask build_separator_mask(const EntityImage& entity, Connectivity connectivity, int maxThickness);

/// Merges same-orientation separators into the connected components of the
/// relation "offset <= offsetTol and gap <= gapTol" over the input set.
std::vector<Separator> connect_collinear(std::span<const Separator> separators, double gapTol,
                                         double offsetTol);

SeparatorGrid prolong_verticals(SeparatorGrid grid);
SeparatorGrid prolong_horizontals_and_titles(SeparatorGrid grid);

/// The five generation steps: connect verticals, prolong verticals, connect
/// horizontals, prolong horizontals and titles.
SeparatorGrid generate_grid(const SeparatorMask& mask, Rect pageBox, const GridOptions& options);

/// Maximal rectangular cells of the separator arrangement clipped to the
/// page, ordered by (top, left).
std::vector<GridBox> extract_grid_boxes(const SeparatorGrid& grid);

/// Attaches lines and titles to boxes and drops boxes without lines. Boxes
/// are renumbered 0..n-1 in their existing order.
std::vector<GridBox> assign_content(std::vector<GridBox> boxes, std::span<const TextLine> lines,
                                    std::span<const TitleBlock> titles, const SeparatorGrid& grid);

/// Id used for the page's top edge when it acts as a delimiter.
inline constexpr int kPageTopDelimiter = -1;

struct Delimiter {
  int separatorId = kPageTopDelimiter;  // horizontal id, or kPageTopDelimiter
  bool isTitle = false;                 // separatorId is a title id
  int length = 0;
};

/// The longest horizontal (separator, title segment, or page top) lying on
/// the box's top edge and covering its width.
std::optional<Delimiter> top_delimiter(const Rect& box, const SeparatorGrid& grid);

/// Union of covered segments per (orientation, position), sorted; used to
/// compare grids by geometry rather than by separator identity.
using SegmentKey = std::tuple<int, int, int, int>;  // (orientation, position, start, end)
std::vector<SegmentKey> normalized_segments(const SeparatorGrid& grid);

}  // namespace artseg
