#include "artseg/smoothing.hpp"

#include <algorithm>

namespace artseg {

bool is_valid_tie_order(const TieOrder& order) noexcept {
  std::array<bool, kInformativeLabelCount> seen{};
  for (auto l : order) {
    if (l == InformativeLabel::Background || seen[std::size_t(l)]) return false;
    seen[std::size_t(l)] = true;
  }
  return true;
}

std::vector<Component> connected_components(const LabelImage& image, Connectivity connectivity) {
  const auto& codes = image.codes();
  auto labels = label_raster(
      image.width(), image.height(), connectivity,
      [&](std::size_t i) { return codes[i] != std::uint8_t(RawLabel::Background); },
      [](std::size_t, std::size_t) { return true; });

  std::vector<Component> components(std::size_t(labels.count));
  for (int i = 0; i < labels.count; ++i) components[std::size_t(i)].id = i;
  const int w = image.width();
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    auto id = labels.ids[i];
    if (id < 0) continue;
    auto& c = components[std::size_t(id)];
    Point p{int(i % std::size_t(w)), int(i / std::size_t(w))};
    c.pixels.push_back(p);
    extend(c.bbox, p);
    ++c.histogram[std::size_t(to_informative(static_cast<RawLabel>(codes[i])))];
  }
  return components;
}

InformativeLabel vote(const LabelHistogram& histogram, const TieOrder& order) {
  InformativeLabel best = order[0];
  std::size_t best_count = 0;
  for (auto label : order) {
    auto n = histogram[std::size_t(label)];
    if (n > best_count) {
      best = label;
      best_count = n;
    }
  }
  return best;
}

EntityImage majority_vote_smooth(const LabelImage& image, Connectivity connectivity,
                                 const TieOrder& order) {
  const auto& codes = image.codes();
  auto labels = label_raster(
      image.width(), image.height(), connectivity,
      [&](std::size_t i) { return codes[i] != std::uint8_t(RawLabel::Background); },
      [](std::size_t, std::size_t) { return true; });

  std::vector<LabelHistogram> histograms(std::size_t(labels.count));
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    if (labels.ids[i] < 0) continue;
    ++histograms[std::size_t(labels.ids[i])][std::size_t(to_informative(static_cast<RawLabel>(codes[i])))];
  }
  std::vector<InformativeLabel> winners(histograms.size());
  std::transform(histograms.begin(), histograms.end(), winners.begin(),
                 [&](const LabelHistogram& h) { return vote(h, order); });

  EntityImage out(image.width(), image.height());
  auto& dst = out.labels();
  for (std::size_t i = 0; i < labels.ids.size(); ++i)
    if (labels.ids[i] >= 0) dst[i] = winners[std::size_t(labels.ids[i])];
  return out;
}

std::vector<EntityComponent> entity_components(const EntityImage& image, Connectivity connectivity) {
  const auto& src = image.labels();
  auto labels = label_raster(
      image.width(), image.height(), connectivity,
      [&](std::size_t i) { return src[i] != InformativeLabel::Background; },
      [&](std::size_t a, std::size_t b) { return src[a] == src[b]; });

  std::vector<EntityComponent> components(std::size_t(labels.count));
  const int w = image.width();
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    auto id = labels.ids[i];
    if (id < 0) continue;
    auto& c = components[std::size_t(id)];
    Point p{int(i % std::size_t(w)), int(i / std::size_t(w))};
    c.label = src[i];
    c.pixels.push_back(p);
    extend(c.bbox, p);
  }
  return components;
}

}  // namespace artseg
