#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace artseg::png {

struct IndexedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> indices;
  std::optional<double> dpi;
};

// Thin wrappers over libpng memory I/O. Decoding failures throw
// artseg::Error(MalformedHeader / TruncatedData).
IndexedImage decode_indexed(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_indexed(const IndexedImage& image,
                                         std::span<const std::array<std::uint8_t, 3>> palette);
std::vector<std::uint8_t> encode_rgb(int width, int height, std::span<const std::uint8_t> rgb);

}  // namespace artseg::png
