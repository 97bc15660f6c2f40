#pragma once

#include "artseg/error.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace artseg {

/// The ten pixel classes produced by the upstream labeler. The numeric codes
/// are the interchange format (label maps store them verbatim).
enum class RawLabel : std::uint8_t {
  Background = 0,
  Character = 1,
  InterCharacter = 2,
  InterWord = 3,
  TitleCharacter = 4,
  TitleInterCharacter = 5,
  TitleInterWord = 6,
  VerticalSeparator = 7,
  HorizontalSeparator = 8,
  Noise = 9,
};

inline constexpr int kRawLabelCount = 10;
inline constexpr int kLabelTableVersion = 1;

/// The six grouped classes the layout logic works on.
enum class InformativeLabel : std::uint8_t {
  VerticalSeparator = 0,
  HorizontalSeparator = 1,
  Title = 2,
  TextLine = 3,
  Noise = 4,
  Background = 5,
};

inline constexpr int kInformativeLabelCount = 6;

constexpr bool is_valid_raw_code(int code) noexcept {
  return code >= 0 && code < kRawLabelCount;
}

constexpr InformativeLabel to_informative(RawLabel raw) noexcept {
  switch (raw) {
    case RawLabel::TitleCharacter:
    case RawLabel::TitleInterCharacter:
    case RawLabel::TitleInterWord:
      return InformativeLabel::Title;
    case RawLabel::Character:
    case RawLabel::InterCharacter:
    case RawLabel::InterWord:
      return InformativeLabel::TextLine;
    case RawLabel::VerticalSeparator:
      return InformativeLabel::VerticalSeparator;
    case RawLabel::HorizontalSeparator:
      return InformativeLabel::HorizontalSeparator;
    case RawLabel::Noise:
      return InformativeLabel::Noise;
    case RawLabel::Background:
      break;
  }
  return InformativeLabel::Background;
}

std::string_view raw_label_name(RawLabel raw) noexcept;
std::string_view informative_label_name(InformativeLabel label) noexcept;
std::optional<InformativeLabel> informative_label_from_name(std::string_view name) noexcept;

/// Canonical code table as a versioned JSON document.
std::string label_table_json();

using Rgb = std::array<std::uint8_t, 3>;

// Display colours, shared by the PNG palette and the overlay renderer.
Rgb raw_label_color(RawLabel raw) noexcept;
Rgb informative_label_color(InformativeLabel label) noexcept;

/// Dense grid of raw label codes, row-major. Every cell is validated on
/// construction, so a LabelImage never holds an out-of-range code.
class LabelImage {
 public:
  LabelImage() = default;
  LabelImage(int width, int height, RawLabel fill = RawLabel::Background);
  /// Throws InvalidLabelCodeError for the first out-of-range cell.
  LabelImage(int width, int height, std::vector<std::uint8_t> codes,
             std::optional<double> dpi = std::nullopt);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return codes_.size(); }
  std::optional<double> dpi() const noexcept { return dpi_; }
  void set_dpi(std::optional<double> dpi) { dpi_ = dpi; }

  RawLabel at(int x, int y) const {
    return static_cast<RawLabel>(codes_[index(x, y)]);
  }
  void set(int x, int y, RawLabel label) {
    codes_[index(x, y)] = static_cast<std::uint8_t>(label);
  }
  const std::vector<std::uint8_t>& codes() const noexcept { return codes_; }

  friend bool operator==(const LabelImage&, const LabelImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return std::size_t(y) * std::size_t(width_) + std::size_t(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> codes_;
  std::optional<double> dpi_;
};

/// Label map after majority-vote smoothing: one informative label per pixel.
class EntityImage {
 public:
  EntityImage() = default;
  EntityImage(int width, int height, InformativeLabel fill = InformativeLabel::Background)
      : width_(width), height_(height),
        labels_(std::size_t(width) * std::size_t(height), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  InformativeLabel at(int x, int y) const {
    return labels_[std::size_t(y) * std::size_t(width_) + std::size_t(x)];
  }
  void set(int x, int y, InformativeLabel l) {
    labels_[std::size_t(y) * std::size_t(width_) + std::size_t(x)] = l;
  }
  const std::vector<InformativeLabel>& labels() const noexcept { return labels_; }
  std::vector<InformativeLabel>& labels() noexcept { return labels_; }

  friend bool operator==(const EntityImage&, const EntityImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<InformativeLabel> labels_;
};

}  // namespace artseg
