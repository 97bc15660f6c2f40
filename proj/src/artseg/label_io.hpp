#pragma once

#include "artseg/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace artseg {

enum class LabelMapFormat {
  Pgm,         // P5, maxval 255, pixel value = raw code
  IndexedPng,  // colour type 3 + sidecar palette {paletteIndex -> rawCode}
};

using PaletteMap = std::map<int, int>;

/// Identity palette (index i -> code i) used when writing PNG label maps.
PaletteMap identity_palette();
PaletteMap parse_palette_json(const std::string& text);
std::string palette_json(const PaletteMap& palette);

LabelImage read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const LabelImage& image);

LabelImage read_indexed_png(std::span<const std::uint8_t> bytes, const PaletteMap& palette);
std::vector<std::uint8_t> write_indexed_png(const LabelImage& image);

/// Decodes a label map from an in-memory byte stream. `palette` is only
/// consulted for IndexedPng.
LabelImage load_label_image(std::span<const std::uint8_t> bytes, LabelMapFormat format,
                            const PaletteMap& palette = identity_palette());

/// Debug dump of an entity image as PGM with informative codes.
std::vector<std::uint8_t> write_entity_pgm(const EntityImage& image);

// File helpers. The format is picked from the extension (.pgm / .png); a PNG
// label map `x.png` reads its palette from `x.palette.json` when present.
LabelMapFormat format_for_path(const std::filesystem::path& path);
std::filesystem::path palette_sidecar_path(const std::filesystem::path& png_path);
LabelImage load_label_map_file(const std::filesystem::path& path);
void save_label_map_file(const LabelImage& image, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Writes via a temporary file and rename so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace artseg
