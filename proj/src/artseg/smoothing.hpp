#pragma once

#include "artseg/geometry.hpp"
#include "artseg/labels.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace artseg {

enum class Connectivity { Four = 4, Eight = 8 };

using LabelHistogram = std::array<std::size_t, kInformativeLabelCount>;

/// Vote priority, highest first. Background never takes part in a vote.
using TieOrder = std::array<InformativeLabel, 5>;

constexpr TieOrder default_tie_order() {
  return {InformativeLabel::VerticalSeparator, InformativeLabel::HorizontalSeparator,
          InformativeLabel::Title, InformativeLabel::TextLine, InformativeLabel::Noise};
}

/// True when `order` is a permutation of the five non-background labels.
bool is_valid_tie_order(const TieOrder& order) noexcept;

struct Component {
  int id = 0;
  std::vector<Point> pixels;  // raster order
  LabelHistogram histogram{};
  Rect bbox;
};

/// Connected regions of pixels sharing one informative label (used after
/// smoothing, where the label is uniform within each region).
struct EntityComponent {
  InformativeLabel label = InformativeLabel::Background;
  std::vector<Point> pixels;
  Rect bbox;
};

/// Union-find labelling of a width x height raster. `foreground(i)` selects
/// pixels; `joinable(a, b)` decides whether two adjacent foreground pixels
/// belong together. Returns per-pixel ids (-1 for background) numbered in
/// order of first appearance in raster order.
struct RasterLabels {
  std::vector<std::int32_t> ids;
  int count = 0;
};

namespace detail {

class DisjointSets {
 public:
  int make() {
    parent_.push_back(int(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[std::size_t(x)] != x) {
      parent_[std::size_t(x)] = parent_[std::size_t(parent_[std::size_t(x)])];
      x = parent_[std::size_t(x)];
    }
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent_[std::size_t(b)] = a;
    else
      parent_[std::size_t(a)] = b;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

template <typename Foreground, typename Joinable>
RasterLabels label_raster(int width, int height, Connectivity connectivity,
                          Foreground&& foreground, Joinable&& joinable) {
  RasterLabels out;
  out.ids.assign(std::size_t(width) * std::size_t(height), -1);
  detail::DisjointSets sets;
  auto& ids = out.ids;
  const bool eight = connectivity == Connectivity::Eight;
  const auto w = std::size_t(width);

  auto link = [&](std::size_t here, std::size_t there) {
    if (ids[there] < 0 || !joinable(here, there)) return;
    if (ids[here] < 0)
      ids[here] = ids[there];
    else if (ids[here] != ids[there])
      sets.join(ids[here], ids[there]);
  };

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * w + std::size_t(x);
      if (!foreground(i)) continue;
      if (x > 0) link(i, i - 1);
      if (y > 0) {
        link(i, i - w);
        if (eight) {
          if (x > 0) link(i, i - w - 1);
          if (x + 1 < width) link(i, i - w + 1);
        }
      }
      if (ids[i] < 0) ids[i] = sets.make();
    }
  }

  // Resolve provisional ids and renumber in raster order of first pixel.
  std::vector<std::int32_t> remap;
  for (auto& id : ids) {
    if (id < 0) continue;
    auto root = std::size_t(sets.find(id));
    if (remap.size() <= root) remap.resize(root + 1, -1);
    if (remap[root] < 0) remap[root] = out.count++;
    id = remap[root];
  }
  return out;
}

/// Components over all non-background pixels, irrespective of label.
std::vector<Component> connected_components(const LabelImage& image, Connectivity connectivity);

/// argmax over the histogram; ties go to the label earliest in `order`.
InformativeLabel vote(const LabelHistogram& histogram, const TieOrder& order = default_tie_order());

EntityImage majority_vote_smooth(const LabelImage& image, Connectivity connectivity,
                                 const TieOrder& order = default_tie_order());

/// Same-label regions of an entity image (background excluded).
std::vector<EntityComponent> entity_components(const EntityImage& image, Connectivity connectivity);

}  // namespace artseg
